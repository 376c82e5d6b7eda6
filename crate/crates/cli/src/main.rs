//! `lgmut`: mutations of Landau-Ginzburg seeds and toric potentials.
//!
//! Payloads go to stdout as JSON (or DOT for `explore --format dot`),
//! diagnostics to stderr. Exit codes: 0 success, 1 bad input, 2 a check
//! failed (non-Laurent mutation, invalid polytope, failed analysis).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use lgmut_core::analysis::{
    critical_report, is_minimal, locus_report, newton, normal_form_2d, vertex_difference_gcd,
};
use lgmut_core::explorer::{
    explore_with, export_graph, ExploreOptions, ExportFormat, DEFAULT_DEPTH_LIMIT,
};
use lgmut_core::seeds::CATALOG_NAMES;
use lgmut_core::toric::{builtin, MonotonePolytope, PolytopeJson};
use lgmut_core::{
    catalog, EquivalenceGroup, Error, LGSeed, LaurentPoly, RationalPoint, SeedMutation, Verdict,
};

#[derive(Parser)]
#[command(
    name = "lgmut",
    version,
    about = "Exact mutations of Laurent polynomial mirrors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed in one direction.
    Mutate {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        index: usize,
        /// Print the canonical form of the result.
        #[arg(long)]
        canonical: bool,
    },
    /// Check that a seed is an LG seed, optionally along all mutations to a depth.
    Verify {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Explore the mutation graph.
    Explore {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value = "json")]
        format: String,
        /// `general` identifies seeds up to GL(2,Z), `special` up to SL(2,Z).
        #[arg(long, default_value = "general")]
        group: String,
    },
    /// List the built-in del Pezzo seeds, or print one.
    Catalog { name: Option<String> },
    /// Monotone polytopes and toric mutations.
    Toric {
        #[command(subcommand)]
        command: ToricCommand,
    },
    /// Newton polytopes, critical points and divisors of a potential.
    Analyze {
        #[command(subcommand)]
        command: AnalyzeCommand,
    },
}

#[derive(Args)]
struct SeedArgs {
    /// Seed JSON file, `-` for stdin.
    file: Option<PathBuf>,
    /// Use a built-in seed instead of a file.
    #[arg(long, conflicts_with = "file")]
    catalog: Option<String>,
}

#[derive(Args)]
struct PolytopeArgs {
    /// Polytope JSON file, `-` for stdin.
    file: Option<PathBuf>,
    /// Built-in polytope: cp2, p1xp1, bl1, bl2, bl3 or cpN.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum ToricCommand {
    /// Validate the polytope.
    Check(PolytopeArgs),
    /// Print the toric potential.
    Potential(PolytopeArgs),
    /// List all mutation configurations.
    Configs(PolytopeArgs),
    /// Mutate the toric potential along a face and a lattice point.
    Mutate {
        #[command(flatten)]
        polytope: PolytopeArgs,
        /// Facet indices cutting out the face, e.g. `0,1`.
        #[arg(long, allow_hyphen_values = true)]
        facets: String,
        /// Lattice point on the face, e.g. `-1,-1,0`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Annihilator basis as `;`-separated vectors, e.g. `-1,1,0;-1,0,1`.
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
    },
}

#[derive(Args)]
struct PotentialArgs {
    #[arg(long, allow_hyphen_values = true)]
    potential: String,
    /// Number of variables; inferred from the names used when omitted.
    #[arg(long)]
    nvars: Option<usize>,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Vertices and dimension of the Newton polytope.
    Newton(PotentialArgs),
    /// GL(2,Z) normal form of a Newton polygon.
    Normalform(PotentialArgs),
    /// Check for a Morse critical point and report the critical value.
    Critical {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Rational coordinates, e.g. `1,1` or `1/2,-3`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Check that W - shift vanishes to the given order along g = 0.
    Locus {
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        shift: String,
        #[arg(long)]
        order: u64,
    },
    /// Whether the Newton polygon is minimal (not a lattice dilation).
    Minimal(PotentialArgs),
}

/// What a command prints and its exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn json(value: &impl Serialize, code: u8) -> Result<Self> {
        Ok(Output {
            text: serde_json::to_string_pretty(value)? + "\n",
            code,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::Mutate {
            seed,
            index,
            canonical,
        } => mutate(&load_seed(&seed)?, index, canonical),
        Command::Verify { seed, depth } => verify(&load_seed(&seed)?, depth),
        Command::Explore {
            seed,
            depth,
            format,
            group,
        } => explore(&load_seed(&seed)?, depth, &format, &group),
        Command::Catalog { name: None } => Output::json(&CATALOG_NAMES, 0),
        Command::Catalog { name: Some(name) } => Output::json(&catalog(&name)?, 0),
        Command::Toric { command } => toric(command),
        Command::Analyze { command } => analyze(command),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_seed(args: &SeedArgs) -> Result<LGSeed> {
    match (&args.file, &args.catalog) {
        (_, Some(name)) => Ok(catalog(name)?),
        (Some(path), None) => {
            let text = read_input(path)?;
            serde_json::from_str(&text).with_context(|| format!("parsing seed {}", path.display()))
        }
        (None, None) => bail!("give a seed file or --catalog NAME"),
    }
}

fn load_polytope(args: &PolytopeArgs) -> Result<std::result::Result<MonotonePolytope, Value>> {
    let json: PolytopeJson = match (&args.file, &args.builtin) {
        (_, Some(name)) => return Ok(Ok(builtin(name)?)),
        (Some(path), None) => serde_json::from_str(&read_input(path)?)
            .with_context(|| format!("parsing polytope {}", path.display()))?,
        (None, None) => bail!("give a polytope file or --builtin NAME"),
    };
    Ok(MonotonePolytope::from_json(&json).map_err(|v| json!({ "valid": false, "violations": v })))
}

fn max_depth() -> Result<usize> {
    match std::env::var("LGMUT_MAX_DEPTH") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("LGMUT_MAX_DEPTH={s:?} is not a nonnegative integer")),
        Err(_) => Ok(DEFAULT_DEPTH_LIMIT),
    }
}

fn parse_group(s: &str) -> Result<EquivalenceGroup> {
    match s {
        "general" => Ok(EquivalenceGroup::General),
        "special" => Ok(EquivalenceGroup::Special),
        other => bail!("unknown group {other:?}; use general or special"),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("{what}: cannot parse {t:?}"))
        })
        .collect()
}

fn parse_potential(args: &PotentialArgs) -> Result<LaurentPoly> {
    let p = match args.nvars {
        Some(n) => LaurentPoly::parse(&args.potential, n)?,
        None => args.potential.parse::<LaurentPoly>()?,
    };
    Ok(p)
}

fn mutate(seed: &LGSeed, index: usize, canonical: bool) -> Result<Output> {
    match seed.mutate(index)? {
        SeedMutation::Seed(s) => {
            let s = if canonical {
                s.canonical_form(EquivalenceGroup::General)?.into_seed()
            } else {
                s
            };
            Output::json(&s, 0)
        }
        SeedMutation::NonLaurent(nl) => {
            eprintln!("mutation {index} is not Laurent");
            Output::json(
                &json!({
                    "index": index,
                    "direction": seed.directions()[index].entries(),
                    "non_laurent": nl,
                }),
                2,
            )
        }
    }
}

fn verify(seed: &LGSeed, depth: Option<usize>) -> Result<Output> {
    if let Verdict::Failed {
        direction,
        iterate,
        witness,
    } = seed.is_lg_seed()?
    {
        eprintln!("direction {direction} fails at iterate {iterate}");
        return Output::json(
            &json!({
                "lg_seed": false,
                "direction": direction.entries(),
                "iterate": iterate,
                "non_laurent": witness,
            }),
            2,
        );
    }
    let Some(depth) = depth else {
        return Output::json(
            &json!({ "lg_seed": true, "directions": seed.directions().len() }),
            0,
        );
    };
    let opts = ExploreOptions {
        depth_limit: max_depth()?,
        verify_seeds: true,
        ..Default::default()
    };
    match explore_with(seed, depth, &opts) {
        Ok(g) => Output::json(
            &json!({
                "lg_seed": true,
                "depth": depth,
                "seeds_verified": g.nodes.len(),
                "levels": g.level_sizes(),
            }),
            0,
        ),
        Err(Error::NonLaurentPath { path, detail }) => {
            eprintln!("non-Laurent mutation along {path:?}: {detail}");
            Output::json(
                &json!({ "lg_seed": false, "depth": depth, "path": path, "detail": detail }),
                2,
            )
        }
        Err(e) => Err(e.into()),
    }
}

fn explore(seed: &LGSeed, depth: usize, format: &str, group: &str) -> Result<Output> {
    let format: ExportFormat = format.parse()?;
    let opts = ExploreOptions {
        depth_limit: max_depth()?,
        group: parse_group(group)?,
        ..Default::default()
    };
    match explore_with(seed, depth, &opts) {
        Ok(g) => Ok(Output {
            text: export_graph(&g, format)?,
            code: 0,
        }),
        Err(Error::NonLaurentPath { path, detail }) => {
            eprintln!("non-Laurent mutation along {path:?}: {detail}");
            Output::json(&json!({ "path": path, "detail": detail }), 2)
        }
        Err(e) => Err(e.into()),
    }
}

fn toric(command: ToricCommand) -> Result<Output> {
    let args = match &command {
        ToricCommand::Check(a) | ToricCommand::Potential(a) | ToricCommand::Configs(a) => a,
        ToricCommand::Mutate { polytope, .. } => polytope,
    };
    let poly = match load_polytope(args)? {
        Ok(p) => p,
        Err(report) => {
            eprintln!("the polytope is not monotone");
            return Output::json(&report, 2);
        }
    };
    match command {
        ToricCommand::Check(_) => Output::json(
            &json!({
                "valid": true,
                "n": poly.dim(),
                "normals": poly.normal_rows(),
                "vertices": poly.vertices(),
            }),
            0,
        ),
        ToricCommand::Potential(_) => {
            let w = poly.toric_potential();
            Output::json(&json!({ "text": w.to_string(), "potential": w }), 0)
        }
        ToricCommand::Configs(_) => Output::json(&poly.mutation_configurations(), 0),
        ToricCommand::Mutate {
            facets,
            point,
            basis,
            ..
        } => {
            let facets: Vec<usize> = parse_list(&facets, "--facets")?;
            let point: Vec<i64> = parse_list(&point, "--point")?;
            let basis: Option<Vec<Vec<i64>>> = basis
                .map(|b| b.split(';').map(|v| parse_list(v, "--basis")).collect())
                .transpose()?;
            let c = poly.formal_configuration(&facets, &point)?;
            let used = match &basis {
                Some(b) => b.clone(),
                None => poly.default_basis(&c),
            };
            let result = poly.toric_mutate(&c, basis.as_deref())?;
            let mut out = json!({
                "face": c.face.active,
                "point": c.point,
                "k": c.k,
                "interior": c.interior,
                "basis": used,
            });
            let code = match result.as_laurent() {
                Some(w) => {
                    out["text"] = json!(w.to_string());
                    out["potential"] = json!(w);
                    0
                }
                None => {
                    if let lgmut_core::Mutated::NonLaurent(nl) = &result {
                        out["non_laurent"] = serde_json::to_value(nl)?;
                    }
                    if !c.interior {
                        let extra: Vec<usize> = poly
                            .active_facets(&point)
                            .into_iter()
                            .filter(|j| !c.face.active.contains(j))
                            .collect();
                        out["diagnosis"] = json!(format!(
                            "point is not interior to the face; it also lies on facets {extra:?}"
                        ));
                    }
                    eprintln!("the mutation is not Laurent");
                    2
                }
            };
            Output::json(&out, code)
        }
    }
}

fn parse_point(s: &str) -> Result<RationalPoint> {
    let coords: Vec<BigRational> = parse_list(s, "--point")?;
    Ok(RationalPoint::new(coords)?)
}

fn analyze(command: AnalyzeCommand) -> Result<Output> {
    match command {
        AnalyzeCommand::Newton(a) => {
            let np = newton(&parse_potential(&a)?)?;
            let kind = match np.affine_dim() {
                0 => "point",
                1 => "segment",
                2 => "polygon",
                _ => "polytope",
            };
            Output::json(
                &json!({
                    "dim": np.dim(),
                    "affine_dim": np.affine_dim(),
                    "kind": kind,
                    "vertices": np.vertices(),
                }),
                0,
            )
        }
        AnalyzeCommand::Normalform(a) => {
            let nf = normal_form_2d(&newton(&parse_potential(&a)?)?)?;
            Output::json(
                &json!({ "signature": nf.signature(), "normal_form": nf }),
                0,
            )
        }
        AnalyzeCommand::Critical { potential, point } => {
            let w = parse_potential(&potential)?;
            let report = critical_report(&w, &parse_point(&point)?)?;
            let code = if report.is_critical { 0 } else { 2 };
            Output::json(&report, code)
        }
        AnalyzeCommand::Locus {
            potential,
            divisor,
            shift,
            order,
        } => {
            let w = parse_potential(&potential)?;
            let g = LaurentPoly::parse(&divisor, w.nvars())?;
            let shift: BigInt = shift
                .trim()
                .parse()
                .with_context(|| format!("--shift: cannot parse {shift:?}"))?;
            let report = locus_report(&w, &g, &shift, order)?;
            let code = if report.passed { 0 } else { 2 };
            Output::json(&report, code)
        }
        AnalyzeCommand::Minimal(a) => {
            let np = newton(&parse_potential(&a)?)?;
            let minimal = is_minimal(&np)?;
            Output::json(
                &json!({ "minimal": minimal, "vertex_gcd": vertex_difference_gcd(&np) }),
                if minimal { 0 } else { 2 },
            )
        }
    }
}

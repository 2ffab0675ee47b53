//! Command-line front end. Every command produces a [`Report`]; the process
//! exits with 0 when it passes, 1 when a verification fails and 2 on bad
//! input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::atlas::{cartier_sublattice, monomial_sections, picard_group, Fan};
use crate::error::{Error, Result};
use crate::laurent::TorusPoint;
use crate::report::Report;
use crate::scattering::{complete_to_order, Diagram, DiagramCache, Status};
use crate::seed::Seed;
use crate::theta::{generic_endpoint, theta, theta_basis_sections, xi_membership};
use crate::torsor::{distinct_primes, trial_rng, verify_r, verify_utor, Chart, FiberSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cluster-torsor", version, about = "Exact computations on cluster varieties with frozen directions")]
pub struct Cli {
    /// Seed file (JSON).
    pub seed: PathBuf,
    #[command(subcommand)]
    pub command: Command,
    /// Radius of the lattice boxes searched.
    #[arg(long, global = true, default_value_t = 3)]
    pub box_radius: i64,
    /// Truncation order of scattering diagrams.
    #[arg(long, global = true, default_value_t = 8)]
    pub order: u32,
    /// Point of the torus `T_M` (comma separated, default: distinct primes).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<i64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for completed scattering diagrams.
    #[arg(long, global = true, env = "CLUSTER_TORSOR_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Seed of the random generator used for trials and endpoints.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the seed axioms.
    Validate,
    /// Mutate along a path of indices.
    Mutate {
        #[arg(long, value_delimiter = ',', required = true)]
        path: Vec<usize>,
    },
    /// Picard group of the partially compactified X-space.
    Pic,
    /// Monomial sections of W(m) in the box.
    Sections {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        degree: Vec<i64>,
    },
    /// Lattice of Cartier divisors for a fan on the frozen rays.
    Cartier {
        /// Fan file (JSON); defaults to the fan of rays.
        #[arg(long)]
        fan: Option<PathBuf>,
    },
    /// Theta function of a principal exponent.
    Theta {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        q: Vec<i64>,
    },
    /// Check the graded pieces of the torsor ring against the charts.
    VerifyR {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        degree: Vec<i64>,
    },
    /// Randomized checks of the torsor identity.
    VerifyUtor {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Theta sections of a line bundle on a fiber.
    ThetaBasis {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<i64>,
        /// Assert that theta functions generate all global functions.
        #[arg(long)]
        full_generation: bool,
    },
}

impl Cli {
    fn config(&self) -> Value {
        json!({
            "seed_file": self.seed.display().to_string(),
            "box_radius": self.box_radius,
            "order": self.order,
            "t": self.t,
            "rng_seed": self.rng_seed,
        })
    }
}

pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.report.to_json(),
            Format::Text => {
                let r = &self.report;
                let mut out = format!("{} {} (seed {})\n", r.theorem, if r.pass { "PASS" } else { "FAIL" }, r.seed_hash);
                for w in &r.witnesses {
                    out.push_str(&format!("  {w}\n"));
                }
                out
            }
        }
    }
}

fn load_seed(path: &Path) -> Result<Seed> {
    Seed::from_json(&std::fs::read_to_string(path)?)
}

fn fiber_spec(seed: &Seed, t: &Option<Vec<i64>>) -> Result<FiberSpec> {
    let coords = t.clone().unwrap_or_else(|| distinct_primes(seed.rank()));
    FiberSpec::new(seed, TorusPoint::from_ints(&coords)?)
}

/// Loads a completed diagram from the cache directory, or completes and
/// stores it.
pub fn cached_diagram(seed: &Seed, order: u32, cache_dir: Option<&Path>) -> Result<Diagram> {
    let hash = seed.content_hash();
    let Some(dir) = cache_dir else {
        return complete_to_order(seed, order);
    };
    let file = dir.join(format!("{hash}-{order}.json"));
    if let Ok(text) = std::fs::read_to_string(&file) {
        let cache: DiagramCache = serde_json::from_str(&text)?;
        if cache.seed_hash == hash && cache.order == order {
            return Diagram::from_cache(seed, &cache);
        }
    }
    let d = complete_to_order(seed, order)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&file, serde_json::to_string_pretty(&d.to_cache(&hash))?)?;
    Ok(d)
}

fn check_len(v: &[i64], want: usize) -> Result<()> {
    if v.len() != want {
        return Err(Error::RankMismatch(want, v.len()));
    }
    Ok(())
}

/// Runs one command. Input errors are returned as `Err`.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let seed = load_seed(&cli.seed)?;
    let hash = seed.content_hash();
    let violations = seed.validate();
    if let Command::Validate = cli.command {
        let mut report = Report::new("Validate", &hash, json!({"config": cli.config()}));
        for v in &violations {
            report.fail(json!({"violation": v.to_string()}));
        }
        let code = if report.pass { 0 } else { 2 };
        return Ok(Outcome { report, exit_code: code });
    }
    seed.ensure_valid()?;
    let mut params = json!({"config": cli.config()});
    let report = match &cli.command {
        Command::Validate => unreachable!("handled above"),
        Command::Mutate { path } => {
            params["path"] = json!(path);
            let end = seed.mutate_path(path)?;
            let mut r = Report::new("Mutate", &hash, params);
            r.note(json!({"seed": serde_json::to_value(end.to_file())?}));
            r.note(json!({"exchange_matrix": end.exchange_matrix().to_rows_i64()}));
            r
        }
        Command::Pic => {
            let mut r = Report::new("Pic", &hash, params);
            r.note(json!({"picard_group": picard_group(&seed).to_string()}));
            r
        }
        Command::Sections { degree } => {
            check_len(degree, seed.num_indices())?;
            params["degree"] = json!(degree);
            let mut r = Report::new("Sections", &hash, params);
            let found = monomial_sections(&seed, degree, cli.box_radius)?;
            r.note(json!({"count": found.len(), "exponents": found}));
            r
        }
        Command::Cartier { fan } => {
            let fan = match fan {
                Some(p) => Fan::from_json(&std::fs::read_to_string(p)?)?,
                None => Fan::rays_only(&seed),
            };
            params["fan"] = json!(fan.cones);
            let basis = cartier_sublattice(&seed, &fan)?;
            let mut r = Report::new("Cartier", &hash, params);
            r.note(json!({"basis": basis.to_cols_i64(), "index": basis.det().abs().to_string()}));
            r
        }
        Command::Theta { q } => {
            check_len(q, seed.num_indices() + seed.rank())?;
            params["q"] = json!(q);
            let d = cached_diagram(&seed, cli.order, cli.cache_dir.as_deref())?;
            let endpoint = generic_endpoint(&d, [1, 1], cli.rng_seed);
            let t = theta(&seed, &d, q, &endpoint)?;
            let xi = if d.status == Status::Exact && t.exact { Some(xi_membership(&seed, &d, q, &endpoint)?) } else { None };
            params["endpoint"] = json!([endpoint[0].to_string(), endpoint[1].to_string()]);
            let mut r = Report::new("Theta", &hash, params);
            r.note(json!({
                "value": t.value.to_string(),
                "laurent": true,
                "xi": xi,
                "degree": t.degree,
                "exact": t.exact,
                "broken_lines": t.broken_lines,
            }));
            if seed.is_skew().is_none() {
                r.note(json!({"caveat": "bracket is not skew-symmetrizable; the wall-crossing rule is applied as for skew seeds"}));
            }
            r
        }
        Command::VerifyR { degree } => {
            check_len(degree, seed.num_indices())?;
            params["degree"] = json!(degree);
            let mut r = Report::new("R", &hash, params);
            let charts = std::iter::once(Chart::Base).chain(seed.indices().iter().map(|&i| Chart::Index(i)));
            for chart in charts {
                r.merge(verify_r(&seed, degree, chart, cli.box_radius)?);
            }
            r
        }
        Command::VerifyUtor { trials } => {
            params["trials"] = json!(trials);
            let spec = fiber_spec(&seed, &cli.t)?;
            let mut rng = trial_rng(cli.rng_seed);
            let mut r = Report::new("UTor", &hash, params);
            r.merge(verify_utor(&seed, *trials, &spec, &mut rng, false)?);
            r
        }
        Command::ThetaBasis { lambda, full_generation } => {
            check_len(lambda, seed.num_indices())?;
            params["lambda"] = json!(lambda);
            let spec = fiber_spec(&seed, &cli.t)?;
            let d = cached_diagram(&seed, cli.order, cli.cache_dir.as_deref())?;
            let endpoint = generic_endpoint(&d, [1, 1], cli.rng_seed);
            let basis = theta_basis_sections(&seed, &d, lambda, &spec, cli.box_radius, &endpoint, *full_generation)?;
            let mut r = Report::new("ThetaBasis", &hash, params);
            for s in &basis.sections {
                if !s.is_section {
                    r.fail(json!({"m": s.m, "not_a_section": s.on_x.to_string()}));
                }
                r.note(json!({"m": s.m, "section": s.on_fiber.to_string()}));
            }
            if !basis.independent {
                r.fail(json!({"dependent": true}));
            }
            r.note(json!({"claim": basis.claim, "count": basis.sections.len()}));
            r
        }
    };
    let code = if report.pass { 0 } else { 1 };
    Ok(Outcome { report, exit_code: code })
}

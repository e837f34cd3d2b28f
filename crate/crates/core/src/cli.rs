//! Command-line front end.
//!
//! Every command prints `key=value` lines ending with a `result=` line, or a
//! JSON object with the same keys under `--json`. Exit status is 0 on
//! success, 1 when a verification fails and 2 on usage or input errors.

use std::fs;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characterization::{compare_with_entropy, ConstraintSystem};
use crate::dist::{ModDist, ModMeasure};
use crate::error::{Error, Result};
use crate::finprob::MPMap;
use crate::modular::{self, PrimeModulus};
use crate::poly;
use crate::report::VerificationReport;
use crate::residue::{self, RationalDist};

pub const DEFAULT_SEED: u64 = 20_240_229;

#[derive(Debug, Parser)]
#[command(name = "modp-entropy", version, about = "Entropy modulo a prime, exactly")]
pub struct Cli {
    /// Emit a JSON object instead of key=value lines
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of a distribution given as P:v1,...,vn
    Entropy { dist: ModDist },
    /// Homogeneous extension of entropy to an arbitrary tuple P:v1,...,vn
    MeasureEntropy { measure: ModMeasure },
    /// Uniform distribution on n points
    Uniform {
        #[arg(long)]
        p: u64,
        n: u64,
    },
    /// Operadic composite OUTER ∘ (INNER, ...)
    Compose {
        outer: ModDist,
        #[arg(required = true)]
        inners: Vec<ModDist>,
    },
    /// Tensor product of two distributions
    Tensor { a: ModDist, b: ModDist },
    /// Fermat quotient (a^(p-1) - 1)/p mod p
    Fq {
        #[arg(long)]
        p: u64,
        #[arg(allow_hyphen_values = true)]
        a: i128,
    },
    /// p-derivation (a - a^p)/p mod p
    Pderiv {
        #[arg(long)]
        p: u64,
        #[arg(allow_hyphen_values = true)]
        a: i128,
    },
    /// Information loss of a measure-preserving map (JSON file, `-` for stdin, or inline JSON)
    Loss { map: String },
    /// Entropy mod p of a rational distribution given as num/den tokens
    Residue {
        #[arg(long)]
        p: u64,
        #[arg(required = true)]
        fractions: Vec<String>,
    },
    /// Exact test of equality of real entropies of two rational distributions
    RealEq {
        /// First distribution, e.g. "1/2 1/8 1/8 1/8 1/8"
        a: String,
        /// Second distribution
        b: String,
        /// Also compare residues mod this prime
        #[arg(long)]
        p: Option<u64>,
    },
    /// Symbolic identities of the entropy polynomial plus a sampled chain-rule check
    Identities {
        #[arg(long)]
        p: u64,
        /// Largest total block size for grouping and chain-rule identities
        #[arg(long, default_value_t = 5)]
        max_block: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of random chain-rule instances
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Polynomial with exponents below p inducing the given table of values
    Interpolate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// p^n values, first variable most significant
        #[arg(allow_hyphen_values = true)]
        values: Vec<i128>,
    },
    /// Solve the truncated chain-rule system and compare its kernel with entropy
    Characterize {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_arity: usize,
        #[arg(long)]
        override_guard: bool,
    },
    /// Exhaustive checks of the Fermat quotient and p-derivation laws
    VerifyCore {
        #[arg(long)]
        p: u64,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Output {
    fields: Vec<(String, String)>,
    failed: bool,
}

impl Output {
    fn new() -> Self {
        Output {
            fields: Vec::new(),
            failed: false,
        }
    }

    fn put(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    fn report(&mut self, key: &str, report: &VerificationReport) {
        self.put(key, if report.passed() { "pass" } else { "fail" });
        if !report.passed() {
            self.failed = true;
            self.put(format!("{key}_violation"), &report.violations[0]);
        }
    }

    fn verdict(&mut self) {
        let verdict = if self.failed { "fail" } else { "pass" };
        self.put("result", verdict);
    }

    fn render(&self, json: bool) -> String {
        if json {
            let map: serde_json::Map<String, serde_json::Value> = self
                .fields
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect();
            format!("{}\n", serde_json::Value::Object(map))
        } else {
            self.fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
        }
    }
}

/// Parses a distribution in either text form: `P:v1,...,vn` (mod p) or
/// whitespace-separated `num/den` fractions (rational).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedDist {
    Mod(ModDist),
    Rational(RationalDist),
}

pub fn parse_dist(text: &str) -> Result<ParsedDist> {
    if text.contains(':') {
        text.parse().map(ParsedDist::Mod)
    } else {
        text.parse().map(ParsedDist::Rational)
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("{}\n", e.to_string().lines().next().unwrap_or("usage error")),
                },
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => Outcome {
            code: u8::from(out.failed),
            stdout: out.render(cli.json),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn prime(p: u64) -> Result<PrimeModulus> {
    PrimeModulus::new(p)
}

fn execute(command: &Command) -> Result<Output> {
    let mut out = Output::new();
    match command {
        Command::Entropy { dist } => {
            out.put("p", dist.modulus())
                .put("n", dist.len())
                .put("result", dist.entropy());
        }
        Command::MeasureEntropy { measure } => {
            out.put("p", measure.modulus())
                .put("n", measure.weights().len())
                .put("total", measure.total())
                .put("result", measure.entropy());
        }
        Command::Uniform { p, n } => {
            let u = ModDist::uniform(*n, prime(*p)?)?;
            out.put("entropy", u.entropy()).put("result", u);
        }
        Command::Compose { outer, inners } => {
            let c = outer.compose(inners)?;
            out.put("entropy", c.entropy()).put("result", c);
        }
        Command::Tensor { a, b } => {
            let t = a.tensor(b)?;
            out.put("entropy", t.entropy()).put("result", t);
        }
        Command::Fq { p, a } => {
            out.put("result", modular::fermat_quotient(*a, prime(*p)?)?);
        }
        Command::Pderiv { p, a } => {
            out.put("result", modular::p_derivation(*a, prime(*p)?));
        }
        Command::Loss { map } => {
            let text = if map.trim_start().starts_with('{') {
                map.clone()
            } else if map == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Parse(e.to_string()))?
            } else {
                fs::read_to_string(map).map_err(|e| Error::Parse(format!("{map}: {e}")))?
            };
            let f = MPMap::from_json(&text)?;
            let loss = f.info_loss();
            let fibrewise = f.fibrewise_loss();
            out.put("p", f.domain().modulus())
                .put("domain_entropy", f.domain().entropy())
                .put("codomain_entropy", f.codomain().entropy())
                .put("conditional", f.conditional_loss())
                .put("fibrewise", fibrewise)
                .put("hidden_zero_fibre", f.has_hidden_zero_fibre())
                .put("isomorphism", f.is_isomorphism());
            if fibrewise != loss {
                out.failed = true;
            }
            out.put("result", loss);
        }
        Command::Residue { p, fractions } => {
            let d: RationalDist = fractions.join(" ").parse()?;
            let reduced = d.reduce_mod(prime(*p)?)?;
            out.put("reduced", &reduced).put("result", reduced.entropy());
        }
        Command::RealEq { a, b, p } => {
            let a: RationalDist = a.parse()?;
            let b: RationalDist = b.parse()?;
            let equal = residue::real_entropy_equal(&a, &b);
            if let Some(p) = p {
                let report = residue::check_residue_well_defined(&a, &b, prime(*p)?)?;
                for (k, v) in &report.details {
                    out.put(k.clone(), v);
                }
                if !report.passed() {
                    out.failed = true;
                }
            }
            out.put("result", equal);
        }
        Command::Identities {
            p,
            max_block,
            seed,
            samples,
        } => {
            let p = prime(*p)?;
            out.put("p", p).put("seed", seed);
            let keys = [
                "cocycle",
                "grouping",
                "poly_chain_rule",
                "pounds1_formula",
                "pounds1_symmetry",
                "homogenization",
                "fundamental_pounds1",
                "fundamental_xp",
            ];
            for (key, report) in keys.iter().zip(poly::check_identities(p, *max_block)?) {
                out.report(key, &report);
            }
            out.report("chain_rule_samples", &sample_chain_rule(p, *seed, *samples));
            out.verdict();
        }
        Command::Interpolate { p, n, values } => {
            let p = prime(*p)?;
            let table: Vec<_> = values.iter().map(|&v| p.residue(v)).collect();
            let f = poly::interpolate_table(&table, p, *n)?;
            out.put("terms", f.num_terms()).put("result", f);
        }
        Command::Characterize {
            p,
            max_arity,
            override_guard,
        } => {
            let system = ConstraintSystem::build(prime(*p)?, *max_arity, *override_guard)?;
            let solution = system.solve();
            let report = compare_with_entropy(&solution, &system);
            for (k, v) in &report.details {
                if k == "unknowns"
                    || k == "rows"
                    || k == "kernel_dim"
                    || k == "contains_entropy"
                    || k == "kernel_is_span_of_entropy"
                {
                    out.put(k.clone(), v);
                }
            }
            out.failed = !report.passed();
            out.verdict();
        }
        Command::VerifyCore { p } => {
            let p = prime(*p)?;
            out.put("p", p);
            out.report("fq_laws", &modular::verify_fq_laws(p)?);
            out.report("pderivation_laws", &modular::verify_pderivation_laws(p)?);
            out.report("hom_uniqueness", &modular::verify_hom_uniqueness(p)?);
            out.verdict();
        }
    }
    Ok(out)
}

/// Checks H(π ∘ γ⃗) = H(π) + Σ πᵢ H(γⁱ) on seeded random instances with
/// outer and inner arities at most 4.
pub fn sample_chain_rule(p: PrimeModulus, seed: u64, samples: usize) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new(format!("chain rule samples, p={p}, seed={seed}"));
    for _ in 0..samples {
        let n = rng.gen_range(1..=4);
        let outer = ModDist::random(&mut rng, p, n);
        let inners: Vec<ModDist> = (0..n)
            .map(|_| {
                let k = rng.gen_range(1..=4);
                ModDist::random(&mut rng, p, k)
            })
            .collect();
        let composite = outer.compose(&inners).expect("matching arity");
        let rhs = outer
            .probs()
            .iter()
            .zip(&inners)
            .fold(outer.entropy(), |acc, (&w, g)| acc + w * g.entropy());
        report.check(composite.entropy() == rhs, || {
            format!(
                "{outer} ∘ {:?}",
                inners.iter().map(ToString::to_string).collect::<Vec<_>>()
            )
        });
    }
    report
}

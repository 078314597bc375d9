use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hecke_cli::checks::{self, honda_model, CRITERIA};
use hecke_cli::output::{self, Format};
use hecke_core::coeff::scalar_to_json;
use hecke_core::fgl::{euler_poly, honda_pseries, render_poly, PSeries};
use hecke_core::hecke::{euclidean_algebra, hecke_homology, surface_algebra, HeckeLieAlgebra, WeightPOpModel};
use hecke_core::lie::{ce_homology, GradedLieAlgebra};
use hecke_core::specseq::{
    apply_assertions, assemble, assertions_from_json, closed_form_euclidean, e2_page, e2_page_cohomological, euclidean_assertions,
    kh_euclidean_total, surface_assertions, surface_bettis,
};
use hecke_core::RingSpec;
use serde_json::json;

/// Exact homology of weighted graded and Hecke Lie algebras, and the
/// spectral-sequence answers built from them.
#[derive(Parser)]
#[command(name = "hecke-ce", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chevalley-Eilenberg homology of a graded Lie algebra given as JSON.
    LieHomology {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_weight: u32,
    },
    /// Homology of a Hecke Lie algebra given as JSON.
    HeckeHomology {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_weight: u32,
        /// Print the E2 page instead of raw homology.
        #[arg(long)]
        page: bool,
        /// Use the cohomological indexing (dual complex).
        #[arg(long)]
        cohomological: bool,
    },
    /// Weight-p answer for p points in R^n with S^k labels.
    Euclidean {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        p: u64,
        /// Height of the Honda formal group; 1 uses the p-local model.
        #[arg(long, default_value_t = 1)]
        height: u32,
        /// Assertion file replacing the built-in d^{p-1}.
        #[arg(long)]
        assertions: Option<PathBuf>,
        /// Check against the closed form; exit nonzero on mismatch.
        #[arg(long)]
        compare: bool,
    },
    /// Weight-p answer for p points in the once-punctured genus-g surface.
    Surface {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        compare: bool,
    },
    /// The Euler-class polynomial f of a p-series.
    EulerPoly {
        /// Use the Honda p-series x^{p^h} over F_p.
        #[arg(long)]
        honda: bool,
        /// p-series coefficients, lowest degree first, e.g. 0,3,0,-1.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        pseries: Option<Vec<i64>>,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        h: u32,
        /// Work over Z/p^N instead of Z_(p).
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Ranks beta_0..beta_p for the punctured genus-g surface.
    Betti {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        p: u64,
    },
    /// Run the engine-versus-closed-form checks; exit nonzero on mismatch.
    Compare {
        /// Run only these criteria (1-8). Default: all.
        #[arg(long)]
        criterion: Vec<u8>,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    let fmt = cli.format;
    match cli.command {
        Command::LieHomology { input, max_weight } => {
            let g = GradedLieAlgebra::from_json(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
            g.check_axioms()?;
            print!("{}", output::summary(&ce_homology(&g, max_weight)?, g.spec().p(), fmt));
        }
        Command::HeckeHomology { input, max_weight, page, cohomological } => {
            let g = HeckeLieAlgebra::from_json(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
            g.lie().check_axioms()?;
            let p = g.spec().p();
            if cohomological {
                print!("{}", output::page(&e2_page_cohomological(&g, max_weight)?, p, fmt));
            } else if page {
                print!("{}", output::page(&e2_page(&g, max_weight)?, p, fmt));
            } else {
                print!("{}", output::summary(&hecke_homology(&g, max_weight)?, p, fmt));
            }
        }
        Command::Euclidean { n, k, p, height, assertions, compare } => {
            let model = if height == 1 { WeightPOpModel::height1(p)? } else { honda_model(p, height)? };
            let g = euclidean_algebra(n, k, &model)?;
            let e2 = e2_page(&g, p as u32)?;
            let asserts = match &assertions {
                Some(path) => assertions_from_json(&read(path)?)?,
                None if height == 1 => euclidean_assertions(k, p),
                None => Vec::new(),
            };
            let einf = apply_assertions(&e2, &asserts)?;
            let got = assemble(&einf)?.weight(p as u32);
            print!("{}", output::assembled(&got, p, fmt));
            if compare {
                let form = closed_form_euclidean(n, k, p);
                let ok = if height == 1 {
                    got == form.evaluate(&model)?
                } else {
                    if k.rem_euclid(2) == 0 {
                        bail!("comparison above height 1 is available for odd k only");
                    }
                    let total: usize = got.entries.values().map(|g| g.free + g.torsion.len()).sum();
                    total as u64 == kh_euclidean_total(n, k, p, height)
                };
                eprintln!("closed form: {}", form.render(if height == 1 { "K" } else { "E" }));
                eprintln!("{}", if ok { "match" } else { "MISMATCH" });
                return Ok(ok);
            }
        }
        Command::Surface { genus, p, compare } => {
            let model = WeightPOpModel::height1(p)?;
            let g = surface_algebra(genus, &model)?;
            let einf = apply_assertions(&e2_page(&g, p as u32)?, &surface_assertions(p))?;
            let got = assemble(&einf)?.weight(p as u32);
            print!("{}", output::assembled(&got, p, fmt));
            if compare {
                let ranks = got.free_ranks(p as u32);
                let bettis = surface_bettis(genus, p);
                let ok = got.entries.values().all(|g| g.torsion.is_empty())
                    && (0..=p as usize).all(|i| ranks.get(&(i as i64)).copied().unwrap_or(0) as u64 == bettis[i])
                    && ranks.keys().all(|d| (0..=p as i64).contains(d));
                eprintln!("{}", if ok { "match" } else { "MISMATCH" });
                return Ok(ok);
            }
        }
        Command::EulerPoly { honda, pseries, p, h, precision } => {
            let ps = match (honda, pseries) {
                (true, None) => honda_pseries(p, h)?,
                (false, Some(c)) => {
                    let spec = match precision {
                        Some(n) => RingSpec::ChainRing { p, n },
                        None => RingSpec::PLocal { p },
                    };
                    PSeries::from_ints(spec, &c)?
                }
                _ => bail!("give exactly one of --honda and --pseries"),
            };
            let f = euler_poly(&ps, h)?;
            match fmt {
                Format::Json => {
                    let coeffs: Vec<_> = f.iter().map(scalar_to_json).collect();
                    print!("{}", output::json_string(&json!({"ring": ps.spec(), "f_coeffs": coeffs, "f": render_poly(&f, "e")})));
                }
                Format::Tsv => {
                    println!("k\tcoeff");
                    for (k, c) in f.iter().enumerate() {
                        println!("{k}\t{c}");
                    }
                }
                Format::Pretty => println!("{}", render_poly(&f, "e")),
            }
        }
        Command::Betti { genus, p } => {
            print!("{}", output::integers("betti", &surface_bettis(genus, p), fmt));
        }
        Command::Compare { criterion } => {
            let ids: Vec<u8> = if criterion.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criterion };
            let mut all = true;
            for id in ids {
                if !(1..=8).contains(&id) {
                    bail!("no criterion {id}");
                }
                let o = checks::run(id);
                all &= o.result.is_ok();
                println!("{}", o.line());
            }
            return Ok(all);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

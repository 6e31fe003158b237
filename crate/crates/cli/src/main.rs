//! `coalsim`: command-line front end for the coalsim library.
//!
//! Exit status: 0 when the check holds or something was found, 1 when it
//! fails or nothing was found, 2 on usage or validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use coalsim::behavioural::{
    behavioural_equivalence, n_step_partition, t_bisim_up_to_difunctionality_check,
    t_bisimulation_check, Partition,
};
use coalsim::harness::{property_info, run_property_suite};
use coalsim::io::{parse_model, parse_named_relation, parse_relation, relation_to_json};
use coalsim::logic::{eval, parse_formula};
use coalsim::simulation::{
    greatest_bisimulation, greatest_n_bisimulation, greatest_simulation, is_bisimulation,
    is_bisimulation_up_to_difunctionality, is_n_bisimulation, is_n_simulation, is_simulation,
    n_simulation_chain, SimulationReport,
};
use coalsim::{Coalgebra, LambdaSignature, Relation, SignatureSpec};

#[derive(Parser)]
#[command(
    name = "coalsim",
    version,
    about = "Simulations and bisimulations for finite coalgebras"
)]
struct Cli {
    /// Signature literal, e.g. "kripke:box,diamond,atoms", "graded:0..3",
    /// "prob:auto-grid", "nbhd:box". Defaults to the separating signature
    /// of the models' functor.
    #[arg(long, global = true)]
    sig: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state.
    Eval {
        model: PathBuf,
        state: String,
        formula: String,
    },
    /// Check whether a relation is a Λ-simulation (or bisimulation).
    CheckSim {
        left: PathBuf,
        right: PathBuf,
        relation: PathBuf,
        /// Check a Λ-bisimulation instead.
        #[arg(long)]
        bi: bool,
        /// Check a Λ-n-(bi)simulation.
        #[arg(long)]
        n: Option<usize>,
        /// Check a Λ-bisimulation up to difunctionality.
        #[arg(long)]
        up_to_difunctional: bool,
    },
    /// Greatest Λ-simulation (or Λ-n-simulation).
    GreatestSim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Greatest Λ-bisimulation (or Λ-n-bisimulation).
    GreatestBisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// n-step equivalence classes of the disjoint union.
    Nstep {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Behavioural equivalence with cross-checks.
    Behavioural {
        left: PathBuf,
        right: PathBuf,
        /// Write the quotient witness as JSON.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Difunctional closure of a relation.
    Closure { relation: PathBuf },
    /// Search for a coupling making the relation a T-bisimulation.
    Tbisim {
        left: PathBuf,
        right: PathBuf,
        relation: PathBuf,
        #[arg(long)]
        up_to_difunctional: bool,
    },
    /// Run a named property on seeded random instances.
    Randtest {
        property: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Verdict and what to print.
struct Output {
    ok: bool,
    text: String,
    json: Value,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_model(path: &Path) -> Result<Coalgebra> {
    parse_model(&read(path)?).with_context(|| format!("loading model {}", path.display()))
}

fn load_pair(left: &Path, right: &Path) -> Result<(Coalgebra, Coalgebra)> {
    Ok((load_model(left)?, load_model(right)?))
}

fn signature(lit: Option<&str>, models: &[&Coalgebra]) -> Result<LambdaSignature> {
    let spec = match lit {
        Some(s) => s.parse::<SignatureSpec>()?,
        None => SignatureSpec::default_for(models[0].tag()),
    };
    Ok(spec.resolve(models)?)
}

fn pair_lines(s: &Relation, c: &Coalgebra, d: &Coalgebra) -> String {
    let mut out = String::new();
    for (x, y) in s.iter() {
        out.push_str(&format!("({}, {})\n", c.name(x), d.name(y)));
    }
    out
}

fn report_output(report: &SimulationReport, c: &Coalgebra, d: &Coalgebra) -> Output {
    let mut text = String::from(if report.holds { "holds\n" } else { "fails\n" });
    let rendered = report.to_json(c, d);
    for v in rendered["violations"].as_array().into_iter().flatten() {
        let set: Vec<&str> = v["set"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        text.push_str(&format!(
            "  {} {} -> {}: {} {{{}}}\n",
            v["direction"].as_str().unwrap_or_default(),
            v["source"].as_str().unwrap_or_default(),
            v["target"].as_str().unwrap_or_default(),
            v["modality"].as_str().unwrap_or_default(),
            set.join(",")
        ));
    }
    Output {
        ok: report.holds,
        text,
        json: rendered,
    }
}

fn relation_output(s: &Relation, c: &Coalgebra, d: &Coalgebra) -> Output {
    Output {
        ok: !s.is_empty(),
        text: pair_lines(s, c, d),
        json: relation_to_json(s, c, d),
    }
}

fn partition_output(p: &Partition, n: usize, c: &Coalgebra, d: &Coalgebra) -> Output {
    let mut text = String::new();
    let mut blocks = Vec::new();
    for (b, members) in p.members().iter().enumerate() {
        let left: Vec<String> = members
            .iter()
            .filter(|m| !m.0)
            .map(|m| c.name(m.1))
            .collect();
        let right: Vec<String> = members
            .iter()
            .filter(|m| m.0)
            .map(|m| d.name(m.1))
            .collect();
        text.push_str(&format!("B{b}: {} | {}\n", left.join(" "), right.join(" ")));
        blocks.push(json!({ "left": left, "right": right }));
    }
    Output {
        ok: true,
        text,
        json: json!({ "n": n, "blocks": blocks }),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let sig_lit = cli.sig.as_deref();
    match &cli.command {
        Command::Eval {
            model,
            state,
            formula,
        } => {
            let c = load_model(model)?;
            let sig = signature(sig_lit, &[&c])?;
            let x = c
                .state(state)
                .with_context(|| format!("unknown state {state:?}"))?;
            let f = parse_formula(formula, &sig)?;
            let holds = eval(&f, &c, x)?;
            Ok(Output {
                ok: holds,
                text: format!("{holds}\n"),
                json: json!({ "state": state, "formula": f.to_string(), "holds": holds }),
            })
        }
        Command::CheckSim {
            left,
            right,
            relation,
            bi,
            n,
            up_to_difunctional,
        } => {
            let (c, d) = load_pair(left, right)?;
            let sig = signature(sig_lit, &[&c, &d])?;
            let s = parse_relation(&read(relation)?, &c, &d)?;
            if *up_to_difunctional {
                if n.is_some() {
                    bail!("--up-to-difunctional cannot be combined with --n");
                }
                return Ok(report_output(
                    &is_bisimulation_up_to_difunctionality(&s, &c, &d, &sig)?,
                    &c,
                    &d,
                ));
            }
            match n {
                Some(n) => {
                    let greatest = if *bi {
                        greatest_n_bisimulation(&c, &d, &sig, *n)?
                    } else {
                        n_simulation_chain(&c, &d, &sig, *n)?
                            .pop()
                            .expect("chain is nonempty")
                    };
                    let holds = if *bi {
                        is_n_bisimulation(&s, &c, &d, &sig, *n)?
                    } else {
                        is_n_simulation(&s, &c, &d, &sig, *n)?
                    };
                    let outside: Vec<(usize, usize)> = s
                        .iter()
                        .filter(|&(x, y)| !greatest.contains(x, y))
                        .collect();
                    let outside_rel = Relation::new(c.len(), d.len(), outside);
                    let mut text = String::from(if holds { "holds\n" } else { "fails\n" });
                    for line in pair_lines(&outside_rel, &c, &d).lines() {
                        text.push_str(&format!("  outside the greatest chain: {line}\n"));
                    }
                    Ok(Output {
                        ok: holds,
                        text,
                        json: json!({
                            "holds": holds,
                            "n": n,
                            "outside": relation_to_json(&outside_rel, &c, &d)["pairs"],
                        }),
                    })
                }
                None if *bi => Ok(report_output(&is_bisimulation(&s, &c, &d, &sig)?, &c, &d)),
                None => Ok(report_output(&is_simulation(&s, &c, &d, &sig)?, &c, &d)),
            }
        }
        Command::GreatestSim { left, right, n } => {
            let (c, d) = load_pair(left, right)?;
            let sig = signature(sig_lit, &[&c, &d])?;
            let s = match n {
                Some(n) => n_simulation_chain(&c, &d, &sig, *n)?
                    .pop()
                    .expect("chain is nonempty"),
                None => greatest_simulation(&c, &d, &sig)?,
            };
            Ok(relation_output(&s, &c, &d))
        }
        Command::GreatestBisim { left, right, n } => {
            let (c, d) = load_pair(left, right)?;
            let sig = signature(sig_lit, &[&c, &d])?;
            let s = match n {
                Some(n) => greatest_n_bisimulation(&c, &d, &sig, *n)?,
                None => greatest_bisimulation(&c, &d, &sig)?,
            };
            Ok(relation_output(&s, &c, &d))
        }
        Command::Nstep { left, right, n } => {
            let (c, d) = load_pair(left, right)?;
            Ok(partition_output(&n_step_partition(&c, &d, *n)?, *n, &c, &d))
        }
        Command::Behavioural {
            left,
            right,
            witness,
        } => {
            let (c, d) = load_pair(left, right)?;
            let sig = signature(sig_lit, &[&c, &d])?;
            let eq = behavioural_equivalence(&c, &d, &sig)?;
            let w = eq.witness.to_json(&c, &d);
            if let Some(path) = witness {
                let mut body = serde_json::to_string_pretty(&w)?;
                body.push('\n');
                fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            }
            let mut out = relation_output(&eq.relation, &c, &d);
            out.json = json!({
                "pairs": out.json["pairs"],
                "rounds": eq.rounds,
                "blocks": eq.witness.block_count(),
            });
            Ok(out)
        }
        Command::Closure { relation } => {
            let named = parse_named_relation(&read(relation)?)?;
            let closed = named.with_relation(named.relation.difunctional_closure());
            let mut text = String::new();
            for (x, y) in closed.relation.iter() {
                text.push_str(&format!("({}, {})\n", closed.left[x], closed.right[y]));
            }
            Ok(Output {
                ok: true,
                text,
                json: closed.to_json(),
            })
        }
        Command::Tbisim {
            left,
            right,
            relation,
            up_to_difunctional,
        } => {
            let (c, d) = load_pair(left, right)?;
            let s = parse_relation(&read(relation)?, &c, &d)?;
            let coupling = if *up_to_difunctional {
                t_bisim_up_to_difunctionality_check(&s, &c, &d)?
            } else {
                t_bisimulation_check(&s, &c, &d)?
            };
            Ok(match coupling {
                Some(k) => {
                    let rendered = k.to_json(&c, &d);
                    let mut text = String::from("coupling found\n");
                    for entry in rendered["couplings"].as_array().into_iter().flatten() {
                        text.push_str(&format!(
                            "  {} {}: {}\n",
                            entry["pair"][0], entry["pair"][1], entry["value"]
                        ));
                    }
                    Output {
                        ok: true,
                        text,
                        json: json!({ "found": true, "coupling": rendered }),
                    }
                }
                None => Output {
                    ok: false,
                    text: "no coupling\n".into(),
                    json: json!({ "found": false }),
                },
            })
        }
        Command::Randtest {
            property,
            trials,
            seed,
        } => {
            if property_info(property).is_none() {
                bail!("unknown property {property:?}");
            }
            let report = run_property_suite(property, *trials, *seed)?;
            eprintln!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
            let mut text = format!(
                "{}: {} trials, seed {}, {} counterexample(s)\n",
                report.property,
                report.trials,
                report.seed,
                report.counterexamples.len()
            );
            for (kind, n) in &report.per_kind {
                text.push_str(&format!("  {kind}: {n} trials\n"));
            }
            for (name, n) in &report.tallies {
                text.push_str(&format!("  {name}: {n}\n"));
            }
            for cx in report.counterexamples.iter().take(5) {
                text.push_str(&format!(
                    "  trial {} (seed {}, {}): {}\n",
                    cx.trial, cx.seed, cx.kind, cx.detail
                ));
            }
            if !report.assertive && !report.counterexamples.is_empty() {
                text.push_str("  FINDINGS RECORDED: the search found candidate counterexamples\n");
            }
            text.push_str(if report.passed() { "PASS\n" } else { "FAIL\n" });
            Ok(Output {
                ok: report.passed(),
                text,
                json: serde_json::to_value(&report)?,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json output")
                );
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

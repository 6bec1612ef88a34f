use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use modring::battery::{verify, VerifyOptions};
use modring::io::{load_algebra, load_module, load_overalg, load_variety};
use modring::modulization::modulize;
use modring::report::{envelope_report, modulize_report, total_report, zmod_report, VERSION};
use modring::ringoid::{enveloping_ringoid, z_of_module, z_of_module_presented};
use modring::terms::FinAlgebra;
use modring::variety::Variety;
use modring::{Error, Result};

const EXIT_PARSE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NOT_STABILIZED: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "modring", version, about = "Modules, modulization and enveloping ringoids of finite algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Out {
    /// Write the JSON report here; without it the report goes to stdout and
    /// the summary to stderr.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enveloping ringoid of an algebra, presented up to a stabilized depth.
    Envelope {
        /// Algebra JSON file or `builtin:NAME`.
        #[arg(long)]
        algebra: String,
        /// `groups`, `ab`, `cring`, `pointed_set` or a variety JSON file.
        #[arg(long)]
        variety: Option<String>,
        /// Starting depth (raised to the variety's minimum window).
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Modulization of a finite pointed overalgebra.
    Modulize {
        /// Overalgebra JSON file or `builtin:NAME/label`.
        #[arg(long)]
        overalgebra: String,
        #[arg(long)]
        variety: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Run the verification battery over the default fleet.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        /// Random samples per sampled property.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Add a broken module to the fleet; the run must then fail.
        #[arg(long)]
        inject_fault: bool,
        #[command(flatten)]
        out: Out,
    },
    /// The ringoid `Z_M` generated by the operation parts of a module.
    Zmod {
        /// Module JSON file or `builtin:NAME/label`.
        #[arg(long)]
        module: String,
        /// Allow infinite fibers (no closure of the generated lattices is decided).
        #[arg(long)]
        presented: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Total algebra `A ⋉ M` or `A ⋉ P` with its projection and section.
    Total {
        #[arg(long, conflicts_with = "overalgebra", required_unless_present = "overalgebra")]
        module: Option<String>,
        #[arg(long)]
        overalgebra: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Check that an algebra lies in a variety, or a module or overalgebra totally in it.
    CheckTotal {
        #[arg(long, group = "input")]
        algebra: Option<String>,
        #[arg(long, group = "input")]
        module: Option<String>,
        #[arg(long, group = "input")]
        overalgebra: Option<String>,
        #[arg(long)]
        variety: Option<String>,
        #[command(flatten)]
        out: Out,
    },
}

/// Outcome of a command that produced a report.
struct Done {
    report: Value,
    summary: String,
    code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse(_) => EXIT_PARSE,
        Error::NotStabilized { .. } => EXIT_NOT_STABILIZED,
        _ => EXIT_INVALID,
    }
}

fn pick_variety(flag: Option<&str>, hint: Option<Variety>) -> Result<Variety> {
    match (flag, hint) {
        (Some(v), _) => load_variety(v),
        (None, Some(v)) => Ok(v),
        (None, None) => Err(Error::Invalid("--variety is required for this input".into())),
    }
}

fn iso_lines(objects: &[String], iso: &[String]) -> String {
    let k = objects.len();
    let mut s = String::new();
    for a in 0..k {
        for b in 0..k {
            s.push_str(&format!("  hom({}, {}): {}\n", objects[a], objects[b], iso[a * k + b]));
        }
    }
    s
}

fn cmd_envelope(algebra: &str, variety: Option<&str>, depth: usize, max_depth: usize) -> Result<Done> {
    let (alg, hint) = load_algebra(algebra)?;
    let v = pick_variety(variety, hint)?;
    match enveloping_ringoid(&v, alg.clone(), depth, max_depth) {
        Ok(env) => {
            let rep = envelope_report(&env, depth, max_depth);
            let iso: Vec<String> = env.ringoid().iso_types().iter().map(ToString::to_string).collect();
            let summary = format!(
                "{} in {}: stabilized at depth {} (requested {}, cap {})\n{}",
                alg.name(),
                v.name(),
                env.depth(),
                depth,
                max_depth,
                iso_lines(env.ringoid().objects(), &iso)
            );
            Ok(Done {
                report: serde_json::to_value(rep).expect("report serializes"),
                summary,
                code: 0,
            })
        }
        Err(err @ Error::NotStabilized { .. }) => Ok(Done {
            report: json!({
                "version": VERSION,
                "algebra": alg.name(),
                "variety": v.name(),
                "requested_depth": depth,
                "max_depth": max_depth,
                "stabilized": false,
                "detail": err.to_string(),
            }),
            summary: format!("{} in {}: {err}\n", alg.name(), v.name()),
            code: EXIT_NOT_STABILIZED,
        }),
        Err(err) => Err(err),
    }
}

fn cmd_modulize(overalgebra: &str, variety: Option<&str>) -> Result<Done> {
    let (p, hint) = load_overalg(overalgebra)?;
    let v = pick_variety(variety, hint)?;
    p.check_totally_in(&v)?;
    let md = modulize(&p);
    let base = p.base();
    let mut summary = format!("modulization over {} in {}\n", base.name(), v.name());
    for a in 0..base.size() {
        summary.push_str(&format!(
            "  fiber over {} ({} points): {}\n",
            base.element_name(a),
            p.fiber_size(a),
            md.result.fiber(a).iso_type()
        ));
    }
    Ok(Done {
        report: modulize_report(&md, v.name()),
        summary,
        code: 0,
    })
}

fn cmd_verify(opts: &VerifyOptions) -> Done {
    let rep = verify(opts);
    let mut tally: Vec<(String, usize, usize)> = Vec::new();
    for c in &rep.checks {
        let key = c.check.split(" into ").next().unwrap_or(&c.check).to_string();
        match tally.iter_mut().find(|(k, _, _)| *k == key) {
            Some(t) => {
                t.1 += usize::from(c.passed);
                t.2 += 1;
            }
            None => tally.push((key, usize::from(c.passed), 1)),
        }
    }
    let mut summary = String::new();
    for (check, ok, total) in &tally {
        let mark = if ok == total { "pass" } else { "FAIL" };
        summary.push_str(&format!("{mark}  {ok:>4}/{total:<4} {check}\n"));
    }
    for c in rep.failures() {
        summary.push_str(&format!("failed: {}: {}: {}\n", c.subject, c.check, c.detail));
    }
    summary.push_str(&format!("{} passed, {} failed (seed {})\n", rep.passed, rep.failed, rep.seed));
    Done {
        code: if rep.all_passed() { 0 } else { EXIT_VERIFY_FAILED },
        report: serde_json::to_value(&rep).expect("report serializes"),
        summary,
    }
}

fn cmd_zmod(module: &str, presented: bool) -> Result<Done> {
    let (m, _) = load_module(module)?;
    let z = if presented {
        z_of_module_presented(&m)?
    } else {
        z_of_module(&m)?
    };
    let iso: Vec<String> = z.ringoid().iso_types().iter().map(ToString::to_string).collect();
    Ok(Done {
        report: zmod_report(&z, m.fibers()),
        summary: format!("Z_M over {}\n{}", m.base().name(), iso_lines(z.ringoid().objects(), &iso)),
        code: 0,
    })
}

fn cmd_total(module: Option<&str>, overalgebra: Option<&str>) -> Result<Done> {
    let (t, source) = match (module, overalgebra) {
        (Some(m), _) => (load_module(m)?.0.total_algebra()?, m),
        (None, Some(p)) => (load_overalg(p)?.0.total_algebra(), p),
        (None, None) => return Err(Error::Invalid("give --module or --overalgebra".into())),
    };
    let summary = format!("total algebra of {source}: {} elements\n", t.algebra.size());
    Ok(Done {
        report: total_report(&t, source),
        summary,
        code: 0,
    })
}

fn cmd_check_total(
    algebra: Option<&str>,
    module: Option<&str>,
    overalgebra: Option<&str>,
    variety: Option<&str>,
) -> Result<Done> {
    let (what, outcome, v) = if let Some(r) = module {
        let (m, hint) = load_module(r)?;
        let v = pick_variety(variety, hint)?;
        (r, m.check_totally_in(&v), v)
    } else if let Some(r) = overalgebra {
        let (p, hint) = load_overalg(r)?;
        let v = pick_variety(variety, hint)?;
        (r, p.check_totally_in(&v), v)
    } else if let Some(r) = algebra {
        let (a, hint) = load_algebra(r)?;
        let v = pick_variety(variety, hint)?;
        (r, algebra_in(&a, &v), v)
    } else {
        return Err(Error::Invalid("give --algebra, --module or --overalgebra".into()));
    };
    outcome?;
    Ok(Done {
        report: json!({"version": VERSION, "input": what, "variety": v.name(), "totally_in": true}),
        summary: format!("{what} is totally in {}\n", v.name()),
        code: 0,
    })
}

fn algebra_in(a: &Arc<FinAlgebra>, v: &Variety) -> Result<()> {
    if !a.signature().same_shape(v.signature()) {
        return Err(Error::SignatureMismatch(format!("{} does not have the signature of {}", a.name(), v.name())));
    }
    match v.violation(a) {
        None => Ok(()),
        Some((id, w)) => Err(Error::NotTotallyInV {
            variety: v.name().to_string(),
            identity: id.to_string(),
            witness: format!("{:?}", w.iter().map(|&x| a.element_name(x)).collect::<Vec<_>>()),
        }),
    }
}

fn emit(done: Done, out: &Out) -> std::result::Result<u8, Error> {
    let text = serde_json::to_string_pretty(&done.report).expect("report serializes") + "\n";
    match &out.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            print!("{}", done.summary);
        }
        None => {
            print!("{text}");
            eprint!("{}", done.summary);
        }
    }
    Ok(done.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match &cli.command {
        Command::Envelope {
            algebra,
            variety,
            depth,
            max_depth,
            out,
        } => (cmd_envelope(algebra, variety.as_deref(), *depth, *max_depth), out),
        Command::Modulize {
            overalgebra,
            variety,
            out,
        } => (cmd_modulize(overalgebra, variety.as_deref()), out),
        Command::Verify {
            seed,
            depth,
            max_depth,
            samples,
            inject_fault,
            out,
        } => {
            let opts = VerifyOptions {
                seed: *seed,
                depth: *depth,
                max_depth: *max_depth,
                samples: *samples,
                inject_fault: *inject_fault,
                ..VerifyOptions::default()
            };
            (Ok(cmd_verify(&opts)), out)
        }
        Command::Zmod { module, presented, out } => (cmd_zmod(module, *presented), out),
        Command::Total {
            module,
            overalgebra,
            out,
        } => (cmd_total(module.as_deref(), overalgebra.as_deref()), out),
        Command::CheckTotal {
            algebra,
            module,
            overalgebra,
            variety,
            out,
        } => (
            cmd_check_total(algebra.as_deref(), module.as_deref(), overalgebra.as_deref(), variety.as_deref()),
            out,
        ),
    };
    let code = result.and_then(|done| emit(done, out));
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}


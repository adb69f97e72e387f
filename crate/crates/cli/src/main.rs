use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cantor_potential::capacity::{
    capacity, capacity_lp_oracle_with_limit, cf_test_check, certify_realizer, realizing_measure,
};
use cantor_potential::enumeration::{sandwich_from_trace, dynamic_weight, GoodEnumeration};
use cantor_potential::io;
use cantor_potential::kernel::Kernel;
use cantor_potential::measure::TrieMeasure;
use cantor_potential::rational::{format_rational, parse_rational};
use cantor_potential::verify::{self, Suite};
use cantor_potential::word::{EventuallyPeriodic, PrefixFreeSet};

#[derive(Parser)]
#[command(name = "cantor-potential", version, about = "Exact potentials, energies and capacities on Cantor space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact capacity of the clopen set spanned by a word list.
    Capacity {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 0)]
        shift: usize,
        /// Also solve the LP oracle and require agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Writes the capacity-realizing measure and checks its certificates.
    Realize {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        shift: usize,
    },
    Energy {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        measure: PathBuf,
    },
    Potential {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        /// Evaluation point as HEAD:PERIOD, e.g. `01:10` or `:0`.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 0)]
        shift: usize,
    },
    Mutual {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        measure2: PathBuf,
    },
    RieszEnergy {
        #[arg(long)]
        ratio: String,
        #[arg(long)]
        measure: PathBuf,
    },
    /// Replays the dynamic weight over an enumeration file.
    Enumerate {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        order: PathBuf,
        /// CSV destination; the trace goes to stdout when omitted.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        shift: usize,
        /// Fail unless the sandwich and the potential lower bound hold.
        #[arg(long)]
        check: bool,
    },
    /// Checks a sequence of numbered level files against the test bound.
    Cftest {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        levels: PathBuf,
    },
    /// Runs the invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Capacity,
    Enumeration,
    Measure,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_kernel(path: &Path) -> Result<Kernel> {
    io::parse_kernel(&read(path)?).with_context(|| path.display().to_string())
}

fn load_measure(path: &Path) -> Result<TrieMeasure> {
    io::parse_measure(&read(path)?).with_context(|| path.display().to_string())
}

fn load_set(path: &Path, kernel: &Kernel) -> Result<PrefixFreeSet> {
    io::parse_set(&read(path)?, kernel.alphabet()).with_context(|| path.display().to_string())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `Ok(true)` when every assertion held.
fn run(command: Command) -> Result<bool> {
    let mut out = std::io::stdout().lock();
    match command {
        Command::Capacity { kernel, set, shift, oracle } => {
            let k = load_kernel(&kernel)?;
            let s = load_set(&set, &k)?;
            let c = capacity(&k, &s, shift)?;
            writeln!(out, "{}", format_rational(&c))?;
            if oracle {
                if shift != 0 {
                    bail!("--oracle supports --shift 0 only");
                }
                let lp = capacity_lp_oracle_with_limit(&k, &s, io::oracle_max_depth_from_env()?)?;
                writeln!(out, "oracle {} {}", format_rational(&lp), verdict(lp == c))?;
                return Ok(lp == c);
            }
            Ok(true)
        }
        Command::Realize { kernel, set, out: path, shift } => {
            let k = load_kernel(&kernel)?;
            let s = load_set(&set, &k)?;
            let result = realizing_measure(&k, &s, shift)?;
            fs::write(&path, io::measure_to_json(&result.realizer) + "\n")
                .with_context(|| format!("cannot write {}", path.display()))?;
            let cert = certify_realizer(&k, &s, shift, &result)?;
            writeln!(out, "capacity {}", format_rational(&result.value))?;
            writeln!(out, "mass_on_set {}", verdict(cert.mass_matches))?;
            writeln!(out, "potential_one_on_set {}", verdict(cert.potential_one_on_set))?;
            writeln!(out, "potential_at_most_one {} max {}", verdict(cert.potential_at_most_one), cert.max_potential)?;
            Ok(cert.holds())
        }
        Command::Energy { kernel, measure } => {
            let k = load_kernel(&kernel)?;
            writeln!(out, "{}", load_measure(&measure)?.energy(&k)?)?;
            Ok(true)
        }
        Command::Potential { kernel, measure, point, shift } => {
            let k = load_kernel(&kernel)?;
            let mu = load_measure(&measure)?;
            let x = EventuallyPeriodic::parse(&point, mu.alphabet()).context("--point")?;
            writeln!(out, "{}", mu.potential(&k, &x, shift)?)?;
            Ok(true)
        }
        Command::Mutual { kernel, measure, measure2 } => {
            let k = load_kernel(&kernel)?;
            let e = load_measure(&measure)?.mutual_energy(&k, &load_measure(&measure2)?)?;
            writeln!(out, "{e}")?;
            Ok(true)
        }
        Command::RieszEnergy { ratio, measure } => {
            let r = parse_rational(&ratio).context("--ratio")?;
            writeln!(out, "{}", load_measure(&measure)?.riesz_energy(&r)?)?;
            Ok(true)
        }
        Command::Enumerate { kernel, order, trace, shift, check } => {
            let k = load_kernel(&kernel)?;
            let e: GoodEnumeration =
                io::parse_enumeration(&read(&order)?, k.alphabet()).with_context(|| order.display().to_string())?;
            let t = dynamic_weight(&k, &e, shift)?;
            let csv = io::trace_to_csv(&k, &e, &t)?;
            let report = sandwich_from_trace(&k, &t)?;
            let mut lines = vec![
                format!("final_ww {}", format_rational(&report.ww)),
                format!("capacity {}", format_rational(&report.capacity)),
                format!("bound_A {}", format_rational(&report.bound_constant)),
                format!("verdict {}", verdict(report.holds())),
            ];
            if check {
                let min = report.min_potential_on_set.as_ref().map_or("-".to_string(), ToString::to_string);
                lines.extend([
                    format!("check lower {}", verdict(report.lower_holds)),
                    format!("check upper {}", verdict(report.upper_holds)),
                    format!("check monotone {}", verdict(report.monotone)),
                    format!("check mass {}", verdict(report.mass_matches)),
                    format!("check potential {} min {min}", verdict(report.potential_holds)),
                ]);
            }
            match trace {
                Some(path) => {
                    fs::write(&path, csv).with_context(|| format!("cannot write {}", path.display()))?;
                    for l in lines {
                        writeln!(out, "{l}")?;
                    }
                }
                None => {
                    out.write_all(csv.as_bytes())?;
                    for l in lines {
                        eprintln!("{l}");
                    }
                }
            }
            Ok(!check || report.holds())
        }
        Command::Cftest { kernel, levels } => {
            let k = load_kernel(&kernel)?;
            let sets = io::level_files(&levels)?
                .iter()
                .map(|p| load_set(p, &k))
                .collect::<Result<Vec<_>>>()?;
            let report = cf_test_check(&k, &sets)?;
            for l in &report.levels {
                writeln!(
                    out,
                    "level {} capacity {} bound {} {}",
                    l.level,
                    format_rational(&l.capacity),
                    format_rational(&l.bound),
                    verdict(l.passed)
                )?;
            }
            writeln!(out, "cftest {}", verdict(report.passed()))?;
            Ok(report.passed())
        }
        Command::Verify { suite } => {
            let suites = match suite {
                SuiteArg::All => Suite::ALL.to_vec(),
                SuiteArg::Capacity => vec![Suite::Capacity],
                SuiteArg::Enumeration => vec![Suite::Enumeration],
                SuiteArg::Measure => vec![Suite::Measure],
            };
            let results = verify::run(&suites);
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let passed = results.iter().filter(|r| r.passed()).count();
            writeln!(out, "{passed}/{} properties passed", results.len())?;
            Ok(passed == results.len())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

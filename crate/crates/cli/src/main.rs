//! Command-line driver for the compiler tower.
//!
//! Exit codes: 0 ok, 1 usage, 2 input error, 3 verification failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use forge::cts2r110::{bundled_library, validate_block_library, BlockLibrary};
use forge::emulators::{verify_ether, Builtin};
use forge::formats::{
    parse_config, parse_cts, parse_rtm, parse_state, parse_tag, parse_tm, write_cts, write_state, write_tag,
};
use forge::nearywoods::{encode_nw_tape, nw_trace_with, NwOptions};
use forge::pipeline::{compile_cts, compile_tm, Compiled};
use forge::r110::{capture, render, run_until_halt, Engine, Format, HaltOptions};
use forge::tag2cts::{compile_tag_to_cts, normalize_cts_mod6};
use forge::tm2tag::compile_tm_to_tag;
use forge::xcheck::run_suite;

#[derive(Parser)]
#[command(name = "forge", version, about = "Compile Turing machines down to Rule 110 and check every level")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a Turing machine and start configuration into a tag system.
    Tm2tag {
        tm: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a tag system (with its tape) into a cyclic tag system.
    Tag2cts {
        tag: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pad a cyclic tag system so every appendant length is a multiple of 6.
    Ctsnorm {
        cts: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lay out the Rule 110 initial state of a cyclic tag system.
    Cts2r110 {
        cts: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Normalize appendant lengths first.
        #[arg(long)]
        normalize: bool,
        /// Block library file; the bundled one by default.
        #[arg(long)]
        library: Option<PathBuf>,
    },
    /// Evolve a Rule 110 state.
    Run {
        state: PathBuf,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        /// Stop at the halting signature and report it.
        #[arg(long)]
        detect_halt: bool,
        /// Also watch for the temporal halting signature.
        #[arg(long)]
        temporal: bool,
        /// Write a space-time diagram of the run.
        #[arg(long)]
        render: Option<PathBuf>,
        /// Columns to render, as x0:x1.
        #[arg(long, default_value = "-200:200", allow_hyphen_values = true)]
        window: String,
        #[arg(long, value_enum, default_value_t = RenderFormat::P1)]
        format: RenderFormat,
        /// Write the final state here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a built-in small machine against the ether it emulates.
    Emulate {
        /// tm2x5, tm3x4, tm4x3 or tm7x2.
        name: String,
        #[arg(long, default_value_t = 100)]
        rows: usize,
        /// Fail unless every row matches.
        #[arg(long)]
        check: bool,
    },
    /// Simulate a right-moving circular machine through its direct tag system.
    Nw {
        rtm: PathBuf,
        #[arg(long, default_value_t = 10)]
        tm_steps: usize,
        /// Print tag steps per machine step as CSV instead of the stage lines.
        #[arg(long)]
        profile: bool,
    },
    /// Run a directory of end-to-end cases.
    Xcheck {
        #[arg(long)]
        suite: PathBuf,
        /// Write the JUnit-style report here instead of stdout.
        #[arg(long)]
        junit: Option<PathBuf>,
    },
    /// Run every pass and write the state and a size manifest.
    Pipeline {
        /// A Turing machine, or a cyclic tag system with --from cts.
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Level::Tm)]
        from: Level,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        library: Option<PathBuf>,
    },
    /// Validate a block library, or write out the bundled one.
    Blocks {
        #[arg(long)]
        library: Option<PathBuf>,
        /// Write the bundled library here.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Tm,
    Cts,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    P1,
    P4,
    Ascii,
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<forge::Error> for Failure {
    fn from(e: forge::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
}

fn emit(out: Option<&Path>, data: &[u8]) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, data).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(data).map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn library(p: Option<&Path>) -> Result<BlockLibrary, Failure> {
    match p {
        None => Ok(bundled_library()),
        Some(p) => Ok(BlockLibrary::parse(&read(p)?)?),
    }
}

fn parse_window(w: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Input(format!("window must be x0:x1, got {w:?}"));
    let (a, b) = w.split_once(':').ok_or_else(bad)?;
    let (a, b) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if b <= a {
        return Err(bad());
    }
    Ok((a, b))
}

fn write_pipeline(c: &Compiled, output: Option<&Path>, manifest: Option<&Path>) -> Outcome {
    emit(output, write_state(&c.assembly.state).as_bytes())?;
    match manifest {
        Some(p) => emit(Some(p), c.manifest.to_text().as_bytes()),
        None => {
            eprint!("{}", c.manifest.to_text());
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Tm2tag { tm, config, output } => {
            let tm = parse_tm(&read(&tm)?)?;
            let cfg = parse_config(&read(&config)?, &tm)?;
            let (sys, tape) = compile_tm_to_tag(&tm, &cfg)?;
            emit(output.as_deref(), write_tag(&sys, Some(&tape))?.as_bytes())
        }
        Cmd::Tag2cts { tag, output } => {
            let (sys, tape) = parse_tag(&read(&tag)?)?;
            let tape = tape.ok_or_else(|| Failure::Input("the tag file has no tape".into()))?;
            let (cts, state) = compile_tag_to_cts(&sys, &tape)?;
            emit(output.as_deref(), write_cts(&cts, &state).as_bytes())
        }
        Cmd::Ctsnorm { cts, output } => {
            let (sys, state) = parse_cts(&read(&cts)?)?;
            let (sys, state) = normalize_cts_mod6(&sys, &state);
            emit(output.as_deref(), write_cts(&sys, &state).as_bytes())
        }
        Cmd::Cts2r110 { cts, output, normalize, library: lib } => {
            let lib = library(lib.as_deref())?;
            let (sys, state) = parse_cts(&read(&cts)?)?;
            let st = if normalize {
                compile_cts(&sys, &state, &lib).map_err(|e| Failure::Input(e.to_string()))?.assembly.state
            } else {
                forge::cts2r110::assemble_state(&sys, &state, &lib)?.state
            };
            emit(output.as_deref(), write_state(&st).as_bytes())
        }
        Cmd::Run { state, steps, detect_halt, temporal, render: out, window, format, output } => {
            let mut st = parse_state(&read(&state)?)?;
            let mut engine = Engine::new();
            if let Some(path) = out {
                let (x0, x1) = parse_window(&window)?;
                let w = capture(&mut st, &mut engine, steps, x0, x1);
                let fmt = match format {
                    RenderFormat::P1 => Format::P1,
                    RenderFormat::P4 => Format::P4,
                    RenderFormat::Ascii => Format::Ascii,
                };
                emit(Some(&path), &render(&w, fmt))?;
            } else if detect_halt {
                let r = run_until_halt(&mut st, &mut engine, steps, HaltOptions { temporal, temporal_grace: 4096 });
                let mut s = format!("halted: {}\nsteps: {}\n", r.halted, r.steps);
                if let Some((t, x)) = r.spatial {
                    let _ = writeln!(s, "spatial: step {t} cell {x}");
                }
                if let Some((t, x)) = r.temporal {
                    let _ = writeln!(s, "temporal: step {t} cell {x}");
                }
                print!("{s}");
            } else {
                engine.run(&mut st, steps);
            }
            if let Some(p) = output {
                emit(Some(&p), write_state(&st).as_bytes())?;
            }
            Ok(())
        }
        Cmd::Emulate { name, rows, check } => {
            let which: Builtin = name.parse()?;
            let rep = verify_ether(which, rows)?;
            println!("{rep}");
            if check && !rep.passed() {
                return Err(Failure::Verify(format!("{name} does not reproduce the ether")));
            }
            Ok(())
        }
        Cmd::Nw { rtm, tm_steps, profile } => {
            let (tm, tape, state) = parse_rtm(&read(&rtm)?)?;
            let opts = NwOptions { keep_snapshots: !profile, ..NwOptions::default() };
            let trace = nw_trace_with(&tm, encode_nw_tape(&tape, state)?, tm_steps, opts)?;
            let mut s = String::new();
            if profile {
                s += "tm_step,tape_len,counter,tag_steps,rounds\n";
                for (i, st) in trace.steps.iter().enumerate() {
                    let _ = writeln!(s, "{},{},{},{},{}", i + 1, st.config.tape.len(), st.counter, st.tag_steps, st.cycles);
                }
            } else {
                for snap in &trace.snapshots {
                    let _ = writeln!(s, "{:>4}  {}", snap.label.to_string(), snap.line());
                }
                let _ = writeln!(s, "tag steps: {}{}", trace.tag_steps, if trace.halted { ", halted" } else { "" });
            }
            emit(None, s.as_bytes())
        }
        Cmd::Xcheck { suite, junit } => {
            let rep = run_suite(&suite, &bundled_library())?;
            for case in &rep.cases {
                for c in &case.checks {
                    eprintln!("{:<10} {:<10} {}", case.name, c.name, c.verdict);
                }
            }
            emit(junit.as_deref(), rep.junit().as_bytes())?;
            if rep.failures() > 0 {
                return Err(Failure::Verify(format!("{} check(s) failed", rep.failures())));
            }
            Ok(())
        }
        Cmd::Pipeline { input, config, from, output, manifest, library: lib } => {
            let lib = library(lib.as_deref())?;
            let compiled = match from {
                Level::Tm => {
                    let tm = parse_tm(&read(&input)?)?;
                    let cfg = config.ok_or_else(|| Failure::Input("--config is required with --from tm".into()))?;
                    let cfg = parse_config(&read(&cfg)?, &tm)?;
                    compile_tm(&tm, &cfg, &lib)
                }
                Level::Cts => {
                    let (sys, state) = parse_cts(&read(&input)?)?;
                    compile_cts(&sys, &state, &lib)
                }
            };
            let compiled = compiled.map_err(|e| Failure::Input(e.to_string()))?;
            write_pipeline(&compiled, output.as_deref(), manifest.as_deref())
        }
        Cmd::Blocks { library: lib, export } => {
            if let Some(p) = export {
                return emit(Some(&p), forge::cts2r110::BUNDLED_LIBRARY.as_bytes());
            }
            let lib = library(lib.as_deref())?;
            let issues = validate_block_library(&lib);
            for i in &issues {
                println!("{i}");
            }
            if issues.is_empty() {
                println!("block library is valid");
                Ok(())
            } else {
                Err(Failure::Verify(format!("{} issue(s)", issues.len())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(3)
        }
    }
}

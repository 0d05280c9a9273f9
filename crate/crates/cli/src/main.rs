use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use ccss_core::analysis::{self, extract_supersequence, greedy_scs, verify_with_budget};
use ccss_core::format::{self, frame_code, read_schematic, unframe_code, write_schematic};
use ccss_core::partition::{self, PartitionInstance, Partitioning};
use ccss_core::{construct, encode, BitString, Corpus, MooreSchematic, SimulationConfig};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ccss", version, about = "Build, apply and measure corpus-compressed streaming schematics")]
struct Cli {
    /// How corpus files are read.
    #[arg(long, value_enum, global = true, default_value_t = Mode::Bitlines)]
    input_mode: Mode,
    /// Drop repeated corpus items instead of rejecting them.
    #[arg(long, global = true)]
    dedupe: bool,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Seed for generated corpora and random playlists.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Bitlines,
    Bytes,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a schematic from a corpus.
    Construct {
        /// Corpus file (bitlines) or one file per item (bytes); `-` reads stdin.
        #[arg(required = true)]
        corpus: Vec<PathBuf>,
        /// Where to write the schematic text.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the packed binary form here.
        #[arg(long)]
        packed: Option<PathBuf>,
    },
    /// Encode one string and emit its framed code.
    Encode {
        schematic: PathBuf,
        bits: String,
        /// Write the frame bytes to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decode a framed code.
    Decode {
        schematic: PathBuf,
        /// File holding the frame bytes.
        #[arg(required_unless_present = "hex", conflicts_with = "hex")]
        frame: Option<PathBuf>,
        /// Frame bytes as hex instead of a file.
        #[arg(long)]
        hex: Option<String>,
    },
    /// Check a schematic against a corpus; exits 1 on any failed item or
    /// a code longer than the budget.
    Verify {
        schematic: PathBuf,
        #[arg(required = true)]
        corpus: Vec<PathBuf>,
        /// Code-length budget in bits; defaults to ceil(log2 n).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Corpus and schematic statistics, including supersequence lengths.
    Stats {
        #[arg(required = true)]
        corpus: Vec<PathBuf>,
    },
    /// Bit accounting for serving a playlist verbatim versus as codes.
    Simulate {
        #[arg(required = true)]
        corpus: Vec<PathBuf>,
        /// JSON simulation config; overrides the playlist flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1.5)]
        ratio: f64,
        /// Play every item in order this many times.
        #[arg(long, default_value_t = 1, conflicts_with = "random_requests")]
        rounds: usize,
        /// Instead, draw this many requests uniformly using --seed.
        #[arg(long)]
        random_requests: Option<usize>,
        /// Fixed per-message overhead; default prices actual frames.
        #[arg(long)]
        framing_bits: Option<usize>,
    },
    /// Partition instances.
    #[command(subcommand)]
    Partition(PartitionCommand),
    /// Write a random corpus in bitlines form using --seed.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        min_len: usize,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum PartitionCommand {
    /// Check an assignment (identity if omitted) against an instance.
    Check {
        instance: PathBuf,
        /// Lines of `<node> <partition>`.
        #[arg(long)]
        assignment: Option<PathBuf>,
        /// Also require partition indices to be exactly 1..=k.
        #[arg(long)]
        strict: bool,
    },
    /// Exhaustively find the fewest partitions meeting tau.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value_t = partition::BRUTE_FORCE_CAP)]
        cap: usize,
    },
    /// Convert a schematic to an instance.
    FromSchematic {
        schematic: PathBuf,
        #[arg(long)]
        tau: u64,
    },
}

/// Exit status for a run that completed but found problems.
struct Findings;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Findings)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn usage_error(message: &str) -> ! {
    Cli::command().error(clap::error::ErrorKind::ArgumentConflict, message).exit()
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_input(path)?).with_context(|| format!("{} is not UTF-8", path.display()))
}

fn load_corpus(cli: &Cli, paths: &[PathBuf]) -> Result<Corpus> {
    let corpus = match cli.input_mode {
        Mode::Bitlines => {
            if paths.len() != 1 {
                usage_error("bitlines mode takes exactly one corpus file");
            }
            format::read_bitlines(&read_text(&paths[0])?, cli.dedupe)
        }
        Mode::Bytes => {
            let files = paths.iter().map(|p| read_input(p)).collect::<Result<Vec<_>>>()?;
            format::read_byte_items(&files, cli.dedupe)
        }
    };
    corpus.with_context(|| format!("reading corpus {}", paths[0].display()))
}

fn load_schematic(path: &Path) -> Result<MooreSchematic> {
    read_schematic(&read_text(path)?).with_context(|| format!("reading schematic {}", path.display()))
}

fn parse_bits(s: &str) -> Result<BitString> {
    s.parse().map_err(|e| anyhow::anyhow!("bad bit string {s:?}: {e}"))
}

fn emit_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: &Cli) -> Result<Option<Findings>> {
    match &cli.command {
        Command::Construct { corpus, output, packed } => {
            cmd_construct(cli, corpus, output.as_deref(), packed.as_deref())
        }
        Command::Encode { schematic, bits, output } => cmd_encode(cli, schematic, bits, output.as_deref()),
        Command::Decode { schematic, frame, hex } => cmd_decode(cli, schematic, frame.as_deref(), hex.as_deref()),
        Command::Verify { schematic, corpus, budget } => cmd_verify(cli, schematic, corpus, *budget),
        Command::Stats { corpus } => cmd_stats(cli, corpus),
        Command::Simulate { corpus, config, ratio, rounds, random_requests, framing_bits } => {
            let c = load_corpus(cli, corpus)?;
            let cfg = match config {
                Some(path) => serde_json::from_str(&read_text(path)?).context("parsing simulation config")?,
                None => {
                    let playlist = match random_requests {
                        Some(count) => {
                            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                            (0..*count).map(|_| rng.gen_range(0..c.n())).collect()
                        }
                        None => (0..*rounds).flat_map(|_| 0..c.n()).collect(),
                    };
                    SimulationConfig { bandwidth_ratio: *ratio, playlist, framing_overhead_bits: *framing_bits }
                }
            };
            cmd_simulate(cli, &c, &cfg)
        }
        Command::Partition(p) => cmd_partition(cli, p),
        Command::Generate { n, min_len, max_len } => cmd_generate(cli, *n, *min_len, *max_len),
    }
}

#[derive(Serialize)]
struct ConstructSummary {
    states: usize,
    total_states: usize,
    stage1_states: usize,
    merges: usize,
    collapsed_start: bool,
    text_bytes: usize,
    packed_bits: usize,
}

fn cmd_construct(
    cli: &Cli,
    paths: &[PathBuf],
    output: Option<&Path>,
    packed: Option<&Path>,
) -> Result<Option<Findings>> {
    let c = load_corpus(cli, paths)?;
    let (d, trace) = construct(&c);
    let text = write_schematic(&d);
    if let Some(path) = output {
        write_file(path, text.as_bytes())?;
    }
    if let Some(path) = packed {
        write_file(path, &format::write_packed(&d))?;
    }
    let summary = ConstructSummary {
        states: d.emitting_state_count(),
        total_states: d.len(),
        stage1_states: trace.stage1_state_count,
        merges: trace.merges.len(),
        collapsed_start: trace.collapsed_start,
        text_bytes: text.len(),
        packed_bits: format::packed_bit_len(&d),
    };
    if cli.format == Format::Json {
        emit_json(&summary)?;
    } else {
        let blank = summary.total_states - summary.states;
        println!("{} states (+{blank} blank, {} total)", summary.states, summary.total_states);
        println!(
            "stage 1: {} states; {} merged; start {}",
            summary.stage1_states,
            summary.merges,
            if summary.collapsed_start { "collapsed" } else { "kept" }
        );
    }
    Ok(None)
}

fn cmd_encode(cli: &Cli, schematic: &Path, bits: &str, output: Option<&Path>) -> Result<Option<Findings>> {
    let d = load_schematic(schematic)?;
    let item = parse_bits(bits)?;
    let code = encode(&d, d.aux(), &item).context("encoding")?;
    let frame = frame_code(&code);
    if let Some(path) = output {
        write_file(path, &frame)?;
    }
    let hex = hex::encode(&frame);
    if cli.format == Format::Json {
        #[derive(Serialize)]
        struct Out<'a> {
            code: String,
            code_bits: usize,
            frame_hex: &'a str,
        }
        emit_json(&Out { code: code.to_string(), code_bits: code.len(), frame_hex: &hex })?;
    } else {
        println!("code {code}");
        println!("frame {hex}");
    }
    Ok(None)
}

fn parse_hex(s: &str) -> Result<Vec<u8>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    hex::decode(&s).with_context(|| format!("bad hex frame {s:?}"))
}

fn cmd_decode(cli: &Cli, schematic: &Path, frame: Option<&Path>, hex: Option<&str>) -> Result<Option<Findings>> {
    let d = load_schematic(schematic)?;
    let bytes = match (frame, hex) {
        (_, Some(h)) => parse_hex(h)?,
        (Some(path), None) => read_input(path)?,
        (None, None) => usage_error("decode needs a frame file or --hex"),
    };
    let code = unframe_code(&bytes).context("reading frame")?;
    let out = d.decode(&code).context("decoding")?;
    if cli.format == Format::Json {
        #[derive(Serialize)]
        struct Out {
            code: String,
            output: String,
        }
        emit_json(&Out { code: code.to_string(), output: out.to_string() })?;
    } else {
        println!("{out}");
    }
    Ok(None)
}

fn cmd_verify(cli: &Cli, schematic: &Path, corpus: &[PathBuf], budget: Option<usize>) -> Result<Option<Findings>> {
    let d = load_schematic(schematic)?;
    let c = load_corpus(cli, corpus)?;
    let budget = budget.unwrap_or(analysis::ceil_log2(c.n() as u64) as usize);
    let r = verify_with_budget(&d, &c, budget, analysis::DEFAULT_PREFIX_BUDGET);
    if cli.format == Format::Json {
        emit_json(&r)?;
    } else {
        println!(
            "items {} (longest {} bits), schematic {} states ({} emitting), {} paths",
            r.n, r.z, r.schematic_states, r.emitting_states, r.path_count
        );
        println!(
            "max code length {} bits, budget {}, lower bound {:.3}",
            r.max_code_len, r.code_len_budget, r.code_len_lower_bound
        );
        match r.epsilon_measured {
            Some(e) => println!("epsilon {e}"),
            None => println!("epsilon undefined: {} items failed", r.failures.len()),
        }
        println!(
            "equal generated sets: {} pairs{}; equal-prefix states: {} pairs{}",
            r.minimality_gen_violations.len(),
            if r.gen_check_complete { "" } else { " (not checked)" },
            r.minimality_prefix_violations.len(),
            if r.prefix_check_complete { "" } else { " (budget reached)" }
        );
    }
    if let Some(f) = r.failures.first() {
        eprintln!("rejected: item {} ({}): {}", f.index + 1, f.item, f.reason);
    }
    if !r.compression_holds() {
        eprintln!("code length {} exceeds budget {}", r.max_code_len, r.code_len_budget);
    }
    Ok((!r.correctness_holds() || !r.compression_holds()).then_some(Findings))
}

#[derive(Serialize)]
struct Stats {
    n: usize,
    z: usize,
    total_bits: usize,
    states: usize,
    emitting_states: usize,
    max_code_len: usize,
    ceil_log2_n: u32,
    code_len_lower_bound: f64,
    extracted_supersequence_len: usize,
    greedy_supersequence_len: usize,
}

fn cmd_stats(cli: &Cli, corpus: &[PathBuf]) -> Result<Option<Findings>> {
    let c = load_corpus(cli, corpus)?;
    let (d, _) = construct(&c);
    let max_code_len = c
        .iter()
        .map(|item| encode(&d, d.aux(), item).map(|code| code.len()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let s = Stats {
        n: c.n(),
        z: c.z(),
        total_bits: c.total_bits(),
        states: d.len(),
        emitting_states: d.emitting_state_count(),
        max_code_len,
        ceil_log2_n: analysis::ceil_log2(c.n() as u64),
        code_len_lower_bound: analysis::code_length_lower_bound(c.n()),
        extracted_supersequence_len: extract_supersequence(&d, None)?.len(),
        greedy_supersequence_len: greedy_scs(c.items()).len(),
    };
    if cli.format == Format::Json {
        emit_json(&s)?;
    } else {
        println!("n {}  z {}  total bits {}", s.n, s.z, s.total_bits);
        println!("schematic {} states ({} emitting)", s.states, s.emitting_states);
        println!(
            "max code length {} (ceil log2 n = {}, lower bound {:.3})",
            s.max_code_len, s.ceil_log2_n, s.code_len_lower_bound
        );
        println!("supersequence: extracted {}, greedy {}", s.extracted_supersequence_len, s.greedy_supersequence_len);
    }
    Ok(None)
}

fn cmd_simulate(cli: &Cli, c: &Corpus, cfg: &SimulationConfig) -> Result<Option<Findings>> {
    let r = ccss_core::simulate(c, cfg)?;
    if cli.format == Format::Json {
        emit_json(&r)?;
        return Ok(None);
    }
    let total = |v: &[u64]| v.last().copied().unwrap_or(0);
    println!("requests {}, bandwidth ratio {}", r.naive_bits_per_request.len(), r.bandwidth_ratio);
    println!("setup {} bits packed ({} as text)", r.setup_bits, r.setup_text_bits);
    println!("max payload {} -> {} bits", r.max_naive_payload_bits, r.max_ccss_payload_bits);
    if let Some(x) = r.max_payload_reduction {
        println!("max payload reduction {:.1}%", 100.0 * x);
    }
    println!(
        "payload target z/r = {:.2} bits: {}",
        r.payload_target_bits,
        if r.within_payload_target { "met" } else { "missed" }
    );
    println!("cumulative naive {} bits, ccss {} bits", total(&r.cumulative_naive), total(&r.cumulative_ccss));
    match r.break_even_request_index {
        Some(i) => println!("break-even at request {i}"),
        None => println!("no break-even"),
    }
    Ok(None)
}

fn load_instance(path: &Path) -> Result<PartitionInstance> {
    PartitionInstance::parse(&read_text(path)?).with_context(|| format!("reading instance {}", path.display()))
}

fn cmd_partition(cli: &Cli, cmd: &PartitionCommand) -> Result<Option<Findings>> {
    match cmd {
        PartitionCommand::Check { instance, assignment, strict } => {
            let inst = load_instance(instance)?;
            let p = match assignment {
                Some(path) => Partitioning::parse(&read_text(path)?)?,
                None => inst.identity_partitioning(),
            };
            let violations = partition::check(&inst, &p, *strict);
            let cost = partition::tau_cost(&inst, &p).ok();
            if cli.format == Format::Json {
                #[derive(Serialize)]
                struct Out<'a> {
                    partitions: usize,
                    cost: Option<u64>,
                    tau: u64,
                    violations: &'a [partition::PartitionViolation],
                }
                emit_json(&Out { partitions: p.partition_count(), cost, tau: inst.tau, violations: &violations })?;
            } else {
                match cost {
                    Some(cost) => println!("{} partitions, cost {cost}, tau {}", p.partition_count(), inst.tau),
                    None => println!("{} partitions, tau {}", p.partition_count(), inst.tau),
                }
                for v in &violations {
                    println!("violation: {v}");
                }
            }
            Ok((!violations.is_empty()).then_some(Findings))
        }
        PartitionCommand::Solve { instance, cap } => {
            let inst = load_instance(instance)?;
            let best = partition::brute_force_min_k(&inst, *cap)?;
            if cli.format == Format::Json {
                #[derive(Serialize)]
                struct Out<'a> {
                    feasible: bool,
                    k: Option<usize>,
                    partitioning: Option<&'a Partitioning>,
                }
                emit_json(&Out {
                    feasible: best.is_some(),
                    k: best.as_ref().map(Partitioning::partition_count),
                    partitioning: best.as_ref(),
                })?;
            } else {
                match &best {
                    Some(p) => {
                        println!("k {}", p.partition_count());
                        print!("{}", p.to_text());
                    }
                    None => println!("infeasible at tau {}", inst.tau),
                }
            }
            Ok(best.is_none().then_some(Findings))
        }
        PartitionCommand::FromSchematic { schematic, tau } => {
            let d = load_schematic(schematic)?;
            print!("{}", partition::schematic_to_instance(&d, *tau)?.to_text());
            Ok(None)
        }
    }
}

fn cmd_generate(cli: &Cli, n: usize, min_len: usize, max_len: usize) -> Result<Option<Findings>> {
    if min_len > max_len {
        usage_error("--min-len exceeds --max-len");
    }
    let capacity: u128 =
        (min_len..=max_len).map(|l| 1u128.checked_shl(l as u32).unwrap_or(u128::MAX)).fold(0, u128::saturating_add);
    if (n as u128) > capacity {
        bail!("only {capacity} distinct strings have lengths in {min_len}..={max_len}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = String::new();
    while seen.len() < n {
        let len = rng.gen_range(min_len..=max_len);
        let s: BitString = (0..len).map(|_| rng.gen::<bool>()).collect();
        if seen.insert(s.clone()) {
            out.push_str(&s.to_string());
            out.push('\n');
        }
    }
    print!("{out}");
    Ok(None)
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use planbench::bench::random::{blocks_domain, random_blocks_plan, random_blocks_problem, BLOCKS_DOMAIN};
use planbench::bench::{load_benchmark_sets, read_records, run_campaign, store_raw, CampaignConfig, EpisodeRecord};
use planbench::pddl::{parse_domain_str, parse_problem_str, Domain, Problem};
use planbench::planners::fast_downward::DEFAULT_ALIAS;
use planbench::planners::{
    build_prompt, format_sas_plan, llm_response_trace, plan_to_json, request_llm_plan, run_fast_downward, FdError,
    FdPlannerConfig, LlmError, LlmPlannerConfig,
};
use planbench::report::{build_report, emit_report, summary_table, universe_from_sets};
use planbench::validate::{Outcome, PlanFormat, TraceResult, Validator};

/// Exit statuses shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Invalid = 1,
    NoPlan = 2,
    Input = 3,
    Environment = 4,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

/// An error to report on stderr together with its exit status.
struct Fail(Status, String);

type CmdResult = Result<Status, Fail>;

fn input_err(msg: impl std::fmt::Display) -> Fail {
    Fail(Status::Input, msg.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlanFormatArg {
    Json,
    Sas,
}

#[derive(Parser)]
#[command(name = "planbench", version, about = "Validate plans and benchmark classical and LLM planners on PDDL tasks")]
struct Cli {
    /// Output format for stdout
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: OutputFormat,
    /// Only print errors on stderr
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Seed for the random instance generator
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a plan against a problem and report PL, Ac and the outcome
    Validate {
        domain: PathBuf,
        problem: PathBuf,
        plan: PathBuf,
        /// Plan encoding; inferred from the file extension when omitted
        #[arg(long, value_enum)]
        format: Option<PlanFormatArg>,
    },
    /// Run Fast Downward and print the last plan it found
    SolveFd {
        domain: PathBuf,
        problem: PathBuf,
        /// Fast Downward driver (path or name on PATH)
        #[arg(long, env = "PLANBENCH_FD", default_value = "fast-downward")]
        fd: PathBuf,
        #[arg(long, default_value = DEFAULT_ALIAS)]
        alias: String,
        #[arg(long, default_value_t = 600)]
        time_limit: u64,
        /// Working directory for plan files (a fresh temporary one by default)
        #[arg(long)]
        work_dir: Option<PathBuf>,
        #[arg(long)]
        validate: bool,
    },
    /// Ask an LLM endpoint for a plan
    SolveLlm {
        domain: PathBuf,
        problem: PathBuf,
        /// Planner config (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Directory for the raw response file
        #[arg(long, default_value = "raw")]
        raw_dir: PathBuf,
        #[arg(long)]
        validate: bool,
    },
    /// Run an evaluation campaign
    Bench {
        config: PathBuf,
        /// Skip episodes already in the results log
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Aggregate a results log into tables and figures
    Report {
        results: PathBuf,
        /// Benchmark root defining the problem set (inferred from the log otherwise)
        #[arg(long)]
        benchmarks: Option<PathBuf>,
        #[arg(long, default_value = "report")]
        out: PathBuf,
        #[arg(long)]
        run_id: Option<String>,
    },
    /// Write random blocks-world instances (and optionally random plans)
    GenBlocks {
        #[arg(long, default_value = "random-blocks")]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Maximum number of blocks per instance
        #[arg(long, default_value_t = 5)]
        max_blocks: usize,
        /// Also write a random action sequence per instance
        #[arg(long)]
        plans: bool,
    },
    /// Print the prompt sent to LLM planners
    Prompt { domain: PathBuf, problem: PathBuf },
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_task(domain: &Path, problem: &Path) -> Result<(Domain, Problem), Fail> {
    let d = parse_domain_str(&read(domain)?).map_err(|e| input_err(format!("{}: {e}", domain.display())))?;
    let p = parse_problem_str(&read(problem)?, &d).map_err(|e| input_err(format!("{}: {e}", problem.display())))?;
    Ok((d, p))
}

fn trace_status(trace: &TraceResult) -> Status {
    match trace.outcome {
        Outcome::Success => Status::Ok,
        Outcome::Failure(_) => Status::Invalid,
        Outcome::NoPlan(_) => Status::NoPlan,
    }
}

fn trace_text(trace: &TraceResult) -> String {
    let outcome = match &trace.outcome {
        Outcome::Success => "success".to_string(),
        Outcome::Failure(r) => format!("failure ({})", r.as_str()),
        Outcome::NoPlan(r) => format!("no plan ({})", r.as_str()),
    };
    let mut s = format!("outcome: {outcome}\nPL={} Ac={}\n", trace.plan_length, trace.executed_actions);
    if let Some(step) = trace.failure_step {
        s.push_str(&format!("failureStep={step}\n"));
    }
    if let Some(d) = &trace.failure_detail {
        s.push_str(&format!("detail: {d}\n"));
    }
    s
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json serializes"));
}

fn cmd_validate(out: OutputFormat, domain: &Path, problem: &Path, plan: &Path, format: Option<PlanFormatArg>) -> CmdResult {
    let (d, p) = load_task(domain, problem)?;
    let text = read(plan)?;
    let format = match format {
        Some(PlanFormatArg::Json) => PlanFormat::Json,
        Some(PlanFormatArg::Sas) => PlanFormat::Sas,
        None if plan.extension().is_some_and(|e| e == "json") => PlanFormat::Json,
        None => PlanFormat::Sas,
    };
    let trace = Validator::new(&d, &p).validate_text(&text, format);
    match out {
        OutputFormat::Json => print_json(&serde_json::to_value(&trace).unwrap()),
        OutputFormat::Text => print!("{}", trace_text(&trace)),
    }
    Ok(trace_status(&trace))
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve_fd(out: OutputFormat, domain: &Path, problem: &Path, fd: PathBuf, alias: String, time_limit: u64, work_dir: Option<PathBuf>, validate: bool) -> CmdResult {
    let (d, p) = load_task(domain, problem)?;
    let scratch = tempfile::tempdir().map_err(|e| Fail(Status::Environment, e.to_string()))?;
    let work_dir = work_dir.unwrap_or_else(|| scratch.path().to_path_buf());
    let cfg = FdPlannerConfig { alias, time_limit_seconds: time_limit, ..FdPlannerConfig::new(fd, work_dir) };
    let resp = match run_fast_downward(&cfg, domain, problem) {
        Ok(r) => r,
        Err(e @ FdError::NoSolutionFound { .. }) => return Err(Fail(Status::NoPlan, e.to_string())),
        Err(e) => return Err(Fail(Status::Environment, e.to_string())),
    };
    let Some(plan) = &resp.plan else {
        return Err(Fail(Status::NoPlan, format!("unreadable plan file: {}", resp.decode_error.unwrap_or_default())));
    };
    let trace = validate.then(|| Validator::new(&d, &p).validate_text(&resp.raw_text, PlanFormat::Sas));
    match out {
        OutputFormat::Json => print_json(&json!({
            "plan": plan.steps,
            "planning_time_s": resp.latency_seconds,
            "trace": trace,
        })),
        OutputFormat::Text => {
            print!("{}", format_sas_plan(plan));
            log::info!("planning time {:.2} s", resp.latency_seconds);
            if let Some(t) = &trace {
                eprint!("{}", trace_text(t));
            }
        }
    }
    Ok(trace.as_ref().map(trace_status).unwrap_or(Status::Ok))
}

fn cmd_solve_llm(out: OutputFormat, domain: &Path, problem: &Path, config: &Path, raw_dir: &Path, validate: bool) -> CmdResult {
    let (d, p) = load_task(domain, problem)?;
    let cfg: LlmPlannerConfig =
        serde_json::from_str(&read(config)?).map_err(|e| input_err(format!("{}: {e}", config.display())))?;
    cfg.check().map_err(input_err)?;
    let (system, user) = build_prompt(&read(domain)?, &read(problem)?);
    let resp = match request_llm_plan(&cfg, &system, &user) {
        Ok(r) => r,
        Err(e @ LlmError::Template(_)) => return Err(input_err(e)),
        Err(e) => return Err(Fail(Status::Environment, e.to_string())),
    };
    let digest = store_raw(raw_dir, &resp.raw_text).map_err(|e| Fail(Status::Environment, format!("{}: {e}", raw_dir.display())))?;
    log::info!("raw response stored as {}/{}.txt", raw_dir.display(), &digest["sha256:".len()..]);
    let trace = llm_response_trace(&Validator::new(&d, &p), &resp);
    if let Outcome::NoPlan(reason) = trace.outcome {
        if out == OutputFormat::Json {
            print_json(&json!({"planning_time_s": resp.latency_seconds, "raw_digest": digest, "trace": trace}));
        }
        return Err(Fail(Status::NoPlan, format!("no plan: {}", reason.as_str())));
    }
    let plan = resp.plan.as_ref().expect("plan present unless no-plan");
    match out {
        OutputFormat::Json => print_json(&json!({
            "plan": serde_json::from_str::<serde_json::Value>(&plan_to_json(plan)).unwrap(),
            "planning_time_s": resp.latency_seconds,
            "raw_digest": digest,
            "trace": validate.then_some(&trace),
        })),
        OutputFormat::Text => {
            println!("{}", plan_to_json(plan));
            log::info!("planning time {:.2} s", resp.latency_seconds);
            if validate {
                eprint!("{}", trace_text(&trace));
            }
        }
    }
    Ok(if validate { trace_status(&trace) } else { Status::Ok })
}

fn cmd_bench(out: OutputFormat, config: &Path, resume: bool, trials: Option<u32>, parallelism: Option<usize>) -> CmdResult {
    let mut cfg = CampaignConfig::from_file(config).map_err(input_err)?;
    cfg.resume |= resume;
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(p) = parallelism {
        cfg.parallelism = p;
    }
    let progress = |r: &EpisodeRecord| {
        log::info!("{} {}/{} {} {:.2}s", r.planner, r.domain, r.problem, r.outcome.as_str(), r.planning_time_s);
    };
    let summary = run_campaign(&cfg, &progress).map_err(input_err)?;
    let n = summary.records.len();
    match out {
        OutputFormat::Json => print_json(&json!({
            "new_episodes": n,
            "already_recorded": summary.resumed,
            "skipped_planners": summary.skipped_planners,
            "results": cfg.results_path(),
        })),
        OutputFormat::Text => {
            if summary.resumed > 0 {
                println!("{n} new episodes ({} already recorded)", summary.resumed);
            } else {
                println!("{n} new episodes");
            }
        }
    }
    Ok(Status::Ok)
}

fn cmd_report(out: OutputFormat, results: &Path, benchmarks: Option<&Path>, dir: &Path, run_id: Option<&str>) -> CmdResult {
    let records = read_records(results).map_err(input_err)?;
    let universe = match benchmarks {
        Some(root) => Some(universe_from_sets(&load_benchmark_sets(root).map_err(input_err)?)),
        None => None,
    };
    let report = build_report(&records, universe, run_id).map_err(input_err)?;
    let written = emit_report(&report, dir).map_err(input_err)?;
    log::info!("wrote {} files under {}", written.len(), dir.display());
    match out {
        OutputFormat::Json => print_json(&serde_json::to_value(&report.planners).unwrap()),
        OutputFormat::Text => print!("{}", summary_table(&report)),
    }
    Ok(Status::Ok)
}

fn cmd_gen_blocks(out: OutputFormat, seed: u64, dir: &Path, count: usize, max_blocks: usize, plans: bool) -> CmdResult {
    let io = |e: std::io::Error| input_err(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("domain.pddl"), BLOCKS_DOMAIN).map_err(io)?;
    let domain = blocks_domain();
    let mut rng = StdRng::seed_from_u64(seed);
    let width = count.to_string().len().max(2);
    let mut files = Vec::new();
    for i in 1..=count {
        let name = format!("p{i:0width$}");
        let n = rng.random_range(1..=max_blocks.clamp(1, 8));
        let text = random_blocks_problem(&mut rng, n, &name);
        fs::write(dir.join(format!("{name}.pddl")), &text).map_err(io)?;
        if plans {
            let problem = parse_problem_str(&text, &domain).expect("generated problem parses");
            let plan = random_blocks_plan(&mut rng, &domain, &problem, 10, 0.7);
            fs::write(dir.join(format!("{name}.plan.json")), plan_to_json(&plan)).map_err(io)?;
        }
        files.push(name);
    }
    match out {
        OutputFormat::Json => print_json(&json!({"dir": dir, "problems": files, "seed": seed})),
        OutputFormat::Text => println!("wrote {count} problems to {}", dir.display()),
    }
    Ok(Status::Ok)
}

fn cmd_prompt(out: OutputFormat, domain: &Path, problem: &Path) -> CmdResult {
    load_task(domain, problem)?;
    let (system, user) = build_prompt(&read(domain)?, &read(problem)?);
    match out {
        OutputFormat::Json => print_json(&json!({"system": system, "user": user})),
        OutputFormat::Text => println!("{system}\n{user}"),
    }
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();

    let out = cli.output;
    let result = match cli.command {
        Command::Validate { domain, problem, plan, format } => cmd_validate(out, &domain, &problem, &plan, format),
        Command::SolveFd { domain, problem, fd, alias, time_limit, work_dir, validate } => {
            cmd_solve_fd(out, &domain, &problem, fd, alias, time_limit, work_dir, validate)
        }
        Command::SolveLlm { domain, problem, config, raw_dir, validate } => {
            cmd_solve_llm(out, &domain, &problem, &config, &raw_dir, validate)
        }
        Command::Bench { config, resume, trials, parallelism } => cmd_bench(out, &config, resume, trials, parallelism),
        Command::Report { results, benchmarks, out: dir, run_id } => {
            cmd_report(out, &results, benchmarks.as_deref(), &dir, run_id.as_deref())
        }
        Command::GenBlocks { out: dir, count, max_blocks, plans } => cmd_gen_blocks(out, cli.seed, &dir, count, max_blocks, plans),
        Command::Prompt { domain, problem } => cmd_prompt(out, &domain, &problem),
    };
    match result {
        Ok(status) => status.into(),
        Err(Fail(status, msg)) => {
            eprintln!("error: {msg}");
            status.into()
        }
    }
}

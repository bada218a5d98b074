//! Command-line front end: impossibility checks, profile resolution,
//! likelihood estimation, brute-force verification, and reference tables,
//! all emitting CSV on stdout.
//!
//! Exit codes: 0 success, 1 verification disagreement, 2 usage or parse
//! error, 3 problematic profile under --strict, 4 enumeration budget
//! exceeded.

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use equivote::impossibility::{anr_impossible, at_large, AtLargeVerdict};
use equivote::likelihood::{
    estimate_violation, exact_violation, theoretical_exponents, DistributionFamily,
};
use equivote::oracle::{
    cross_check_impossibility, verify_most_equitable, EnumerationBudget, VerifyReport,
};
use equivote::prefs::{Pref, PriorityOrder, Profile, Setting};
use equivote::rules::RuleSpec;
use equivote::tiebreak::{resolve, resolve_explain, TieBreaker};
use equivote::Error;

#[derive(Parser)]
#[command(name = "equivote", version, about = "Most-equitable voting toolkit")]
struct Cli {
    /// Worker threads (default: all cores). Output order is deterministic
    /// either way.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide ANR impossibility for a setting at given electorate sizes
    Check(CheckArgs),
    /// Resolve a profile to a single decision
    Resolve(ResolveArgs),
    /// Estimate or compute the probability of a problematic profile
    Estimate(EstimateArgs),
    /// Run brute-force cross-checks; exit 1 on any disagreement
    Verify(VerifyArgs),
    /// Regenerate a named reference table
    Table(TableArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Setting such as "L2>L1", "C<=5>L1", "Lm>Cm"
    #[arg(long)]
    setting: String,
    #[arg(long)]
    m: usize,
    #[arg(long, conflicts_with = "n_range")]
    n: Option<u64>,
    /// Inclusive range "a..b" with optional ":step"
    #[arg(long = "n-range")]
    n_range: Option<String>,
    /// Also report whether impossibility holds for all large n
    #[arg(long)]
    at_large: bool,
}

#[derive(Args)]
struct ResolveArgs {
    /// Profile file: one vote per line, "#" comments, "N x VOTE" multiplicity
    #[arg(long)]
    profile: String,
    #[arg(long)]
    rule: String,
    #[arg(long, default_value = "mfp")]
    tiebreak: String,
    /// Setting; default "Lm>L1" for ranking profiles, "C<=m>L1" for
    /// committee profiles
    #[arg(long)]
    setting: Option<String>,
    /// Number of alternatives; default inferred from the profile
    #[arg(long)]
    m: Option<usize>,
    /// Show the winning set, stabilizer, fixed decisions, and chosen
    /// relabeling
    #[arg(long)]
    explain: bool,
    /// Fail (exit 3) when the profile is problematic, i.e. tie-breaking
    /// cannot preserve both anonymity and neutrality
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    rule: String,
    #[arg(long, default_value = "mfp")]
    tiebreak: String,
    #[arg(long)]
    m: usize,
    #[arg(long, conflicts_with = "n_range")]
    n: Option<u64>,
    #[arg(long = "n-range")]
    n_range: Option<String>,
    /// "ic", "mallows:PHI" or "mallows:PHI:REF" (e.g. "mallows:0.5:2>1>3")
    #[arg(long, default_value = "ic")]
    dist: String,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate all histograms instead of Monte Carlo sampling
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// "small" (seconds) or "medium" (minutes)
    #[arg(long, default_value = "small")]
    grid: String,
}

#[derive(Args)]
struct TableArgs {
    /// "coins-m4-l2", "alpha", or "list2-list2"
    #[arg(long)]
    name: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Budget(_) => ExitCode::from(4),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Check(a) => cmd_check(a),
        Command::Resolve(a) => cmd_resolve(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Table(a) => cmd_table(a),
    }
}

/// Inclusive "a..b" with optional ":step".
fn parse_n_range(s: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Parse(format!("bad range {s:?}, expected a..b or a..b:step"));
    let (range, step) = match s.split_once(':') {
        Some((r, st)) => (r, st.parse::<u64>().map_err(|_| bad())?),
        None => (s, 1),
    };
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.parse().map_err(|_| bad())?;
    let b: u64 = b.parse().map_err(|_| bad())?;
    if step == 0 || a > b {
        return Err(bad());
    }
    Ok((a..=b).step_by(step as usize).collect())
}

fn ns_from(n: Option<u64>, n_range: &Option<String>) -> Result<Vec<u64>, Error> {
    match (n, n_range) {
        (Some(n), None) => Ok(vec![n]),
        (None, Some(r)) => parse_n_range(r),
        _ => Err(Error::Parse("give exactly one of --n / --n-range".into())),
    }
}

/// Decimal with 12 significant digits, locale-free.
fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Quote a CSV field only when it needs it.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verdict_fields(v: AtLargeVerdict) -> (String, String) {
    match v {
        AtLargeVerdict::Holds { threshold_n } => ("holds".into(), threshold_n.to_string()),
        AtLargeVerdict::HoldsNot => ("holds-not".into(), String::new()),
        AtLargeVerdict::Unknown => ("unknown".into(), String::new()),
    }
}

fn cmd_check(a: CheckArgs) -> Result<ExitCode, Error> {
    let setting = Setting::parse(&a.setting, a.m)?;
    if a.n.is_none() && a.n_range.is_none() {
        if !a.at_large {
            return Err(Error::Parse("give --n, --n-range, or --at-large".into()));
        }
        let (verdict, threshold) = verdict_fields(at_large(&setting));
        println!("m,setting,at_large,threshold_n");
        println!("{},{},{verdict},{threshold}", a.m, csv_field(&a.setting));
        return Ok(ExitCode::SUCCESS);
    }
    let ns = ns_from(a.n, &a.n_range)?;
    let at = a.at_large.then(|| verdict_fields(at_large(&setting)));
    match &at {
        Some(_) => println!("m,n,setting,impossible,witness,at_large,threshold_n"),
        None => println!("m,n,setting,impossible,witness"),
    }
    for n in ns {
        let witness = anr_impossible(&setting, n)?;
        let row = format!(
            "{},{n},{},{},{}",
            a.m,
            csv_field(&a.setting),
            witness.is_some(),
            csv_field(&witness.map(|w| w.to_string()).unwrap_or_default()),
        );
        match &at {
            Some((v, t)) => println!("{row},{v},{t}"),
            None => println!("{row}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_resolve(a: ResolveArgs) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(&a.profile)
        .map_err(|e| Error::Parse(format!("{}: {e}", a.profile)))?;
    let profile = Profile::parse(&text)?;
    let m = a.m.unwrap_or_else(|| infer_m(&profile));
    let setting = match &a.setting {
        Some(s) => Setting::parse(s, m)?,
        None => {
            let all_full = profile.votes.iter().all(|v| v.is_list() && v.size() == m);
            Setting::parse(if all_full { "Lm>L1" } else { "C<=m>L1" }, m)?
        }
    };
    let rule = RuleSpec::parse(&a.rule)?;
    let tiebreak = TieBreaker::parse(&a.tiebreak)?;
    let prio = PriorityOrder::default_for(m);

    if a.explain {
        let ex = resolve_explain(&rule, &tiebreak, &profile, &setting, &prio)?;
        println!("winners: {}", join_prefs(&ex.winners));
        println!("stabilizer: {}", ex.stab.elements().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "));
        println!("fixed decisions: {}", join_prefs(&ex.fpd));
        println!("most popular votes: {}", ex.mpr.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "));
        if let (Some(r), Some(s)) = (&ex.r_star, &ex.sigma) { println!("chosen vote R*: {r}  relabeling: {s}") }
        println!("backup fired: {}", ex.backup_fired);
        println!("decision: {}", ex.decision);
        if a.strict && ex.backup_fired {
            return Ok(ExitCode::from(3));
        }
        return Ok(ExitCode::SUCCESS);
    }
    if a.strict {
        let problematic =
            equivote::tiebreak::is_problematic(&profile.histogram(), &rule, &setting)?;
        if problematic {
            eprintln!("profile is problematic: no resolute rule can stay anonymous and neutral");
            return Ok(ExitCode::from(3));
        }
    }
    let d = resolve(&rule, &tiebreak, &profile, &setting, &prio)?;
    println!("{d}");
    Ok(ExitCode::SUCCESS)
}

fn infer_m(p: &Profile) -> usize {
    p.votes
        .iter()
        .flat_map(|v| v.alts().iter())
        .copied()
        .max()
        .unwrap_or(1) as usize
}

fn join_prefs(set: &BTreeSet<Pref>) -> String {
    set.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_estimate(a: EstimateArgs) -> Result<ExitCode, Error> {
    let setting = Setting::parse("Lm>L1", a.m)?;
    let rule = RuleSpec::parse(&a.rule)?;
    TieBreaker::parse(&a.tiebreak)?; // the rate depends only on the rule; validate anyway
    let dist = parse_dist(&a.dist, a.m)?;
    let ns = ns_from(a.n, &a.n_range)?;
    let budget = EnumerationBudget::from_env();
    println!("m,n,rule,tiebreak,dist,rate,stderr,exact,theoretical_lower_exp,theoretical_upper_exp");
    for n in ns {
        let est = if a.exact {
            exact_violation(&rule, &setting, &dist, n, &budget)?
        } else {
            estimate_violation(&rule, &setting, &dist, n, a.trials, a.seed)?
        };
        let (lo, hi) = theoretical_exponents(a.m, n);
        println!(
            "{},{n},{},{},{},{},{},{},{},{}",
            a.m,
            csv_field(&a.rule),
            csv_field(&a.tiebreak),
            csv_field(&a.dist),
            fmt_real(est.rate),
            fmt_real(est.stderr),
            est.exact,
            fmt_real(lo),
            fmt_real(hi),
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_dist(s: &str, m: usize) -> Result<DistributionFamily, Error> {
    if s == "ic" {
        return Ok(DistributionFamily::ImpartialCulture);
    }
    if let Some(rest) = s.strip_prefix("mallows:") {
        let (phi, reference) = match rest.split_once(':') {
            Some((phi, r)) => {
                let vote = Pref::parse(r)?;
                (phi, vote.alts().to_vec())
            }
            None => (rest, (1..=m as u8).collect()),
        };
        let phi: f64 = phi
            .parse()
            .map_err(|_| Error::Parse(format!("bad phi {phi:?}")))?;
        if reference.len() != m {
            return Err(Error::Parse("reference ranking must cover all m alternatives".into()));
        }
        return DistributionFamily::mallows(phi, reference);
    }
    Err(Error::Parse(format!(
        "unknown distribution {s:?}, expected ic or mallows:PHI[:REF]"
    )))
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, Error> {
    let budget = EnumerationBudget::from_env();
    let (cross_m_max, cross_n_max, rules, vme_m_max, vme_n_max): (usize, u64, Vec<RuleSpec>, usize, u64) =
        match a.grid.as_str() {
            "small" => (3, 6, vec![RuleSpec::Plurality], 3, 3),
            "medium" => (
                4,
                8,
                vec![RuleSpec::Plurality, RuleSpec::Borda, RuleSpec::Veto],
                4,
                4,
            ),
            other => return Err(Error::Parse(format!("unknown grid {other:?}"))),
        };

    let mut settings = Vec::new();
    for m in 2..=cross_m_max {
        for pref_kind in ["L", "C"] {
            for dec_kind in ["L", "C"] {
                for l in 1..=2usize.min(m) {
                    for k in 1..=2usize.min(m) {
                        settings.push(Setting::parse(&format!("{pref_kind}{l}>{dec_kind}{k}"), m)?);
                    }
                }
            }
        }
    }
    let disagreements = cross_check_impossibility(&settings, 1, cross_n_max, &budget)?;
    println!(
        "impossibility cross-check: {} grid points, {} disagreements",
        settings.len() as u64 * cross_n_max,
        disagreements.len()
    );
    for d in &disagreements {
        println!("DISAGREE {d}");
    }

    let tiebreak = TieBreaker::parse("mfp")?;
    let mut failures = disagreements.len();
    for m in 2..=vme_m_max {
        let setting = Setting::parse("Lm>L1", m)?;
        for n in 1..=vme_n_max {
            for rule in &rules {
                let report: VerifyReport =
                    verify_most_equitable(rule, &tiebreak, &setting, n, &budget)?;
                println!(
                    "verify {rule} mfp m={m} n={n}: {} histograms, {} problematic, {} violations",
                    report.checked,
                    report.problematic,
                    report.violations.len()
                );
                for v in &report.violations {
                    println!("VIOLATION {}: {}", v.histogram, v.detail);
                }
                failures += report.violations.len();
            }
        }
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_table(a: TableArgs) -> Result<ExitCode, Error> {
    use equivote::groups::partitions;
    use equivote::impossibility::{alpha_bounds, lcmset, CoinOp};
    match a.name.as_str() {
        "coins-m4-l2" => {
            println!("partition,circledast,oslash");
            for pm in partitions(4) {
                let fmt = |op| -> Result<String, Error> {
                    let coins = lcmset(&pm, 2, op)?;
                    Ok(format!(
                        "{{{}}}",
                        coins.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
                    ))
                };
                println!(
                    "{},{},{}",
                    csv_field(&pm.to_string()),
                    csv_field(&fmt(CoinOp::Circledast)?),
                    csv_field(&fmt(CoinOp::Oslash)?)
                );
            }
        }
        "alpha" => {
            println!("m,n,alpha_max,alpha_max_plus");
            for (m, n) in [(3usize, 5u64), (3, 8), (5, 12), (6, 12)] {
                let b = alpha_bounds(m, n);
                let s = |v: Option<u64>| v.map_or("-inf".to_string(), |x| x.to_string());
                println!("{m},{n},{},{}", s(b.alpha_max), s(b.alpha_max_plus));
            }
        }
        "list2-list2" => {
            println!("m,n,setting,impossible,witness");
            for s in ["L2>L2", "L2>C2", "C2>L2", "C2>C2"] {
                let setting = Setting::parse(s, 4)?;
                for n in 1..=24 {
                    let w = anr_impossible(&setting, n)?;
                    println!(
                        "4,{n},{s},{},{}",
                        w.is_some(),
                        csv_field(&w.map(|p| p.to_string()).unwrap_or_default())
                    );
                }
            }
        }
        other => return Err(Error::Parse(format!("unknown table {other:?}"))),
    }
    Ok(ExitCode::SUCCESS)
}

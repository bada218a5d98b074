//! Tie-breaking mechanisms: maps from a profile and a nonempty decision set
//! to a single decision, turning irresolute rules into resolute ones.
//!
//! Besides the classic lexicographic and fixed-agent mechanisms, this module
//! implements most-favorable-permutation (MFP) tie-breaking: relabel the
//! alternatives by the permutation that lifts the profile's histogram as
//! high as possible in the priority order, then pick the fixed-point
//! decision whose relabeled form has the highest priority. The resulting
//! resolute rule satisfies anonymity, neutrality, and resolvability at every
//! profile where any refinement can — the profiles where none can (empty
//! fixed-point decision set) fall through to a backup mechanism and carry a
//! violation witness.

use std::collections::BTreeSet;

use crate::groups::{fpd_from_stab, perm_mapping_ranking, stab_histogram, PermGroup};
use crate::prefs::{Histogram, Perm, Pref, PriorityOrder, Profile, Setting, MAX_M};
use crate::rules::{evaluate, RuleSpec};
use crate::{Error, Result};

/// A tie-breaking mechanism. MFP carries a backup (never itself MFP) for
/// profiles where no fixed-point decision exists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TieBreaker {
    Lex,
    /// 1-based voter index whose vote induces the priority.
    FixedAgent(usize),
    Mfp(Box<TieBreaker>),
}

impl TieBreaker {
    /// Parses `"lex"`, `"agent:1"`, `"mfp"` (= `mfp:lex`), `"mfp:agent:1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "lex" {
            return Ok(TieBreaker::Lex);
        }
        if let Some(i) = s.strip_prefix("agent:") {
            let idx = i
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad agent index {i:?}")))?;
            if idx == 0 {
                return Err(Error::Parse("agent indices are 1-based".into()));
            }
            return Ok(TieBreaker::FixedAgent(idx));
        }
        if s == "mfp" {
            return Ok(TieBreaker::Mfp(Box::new(TieBreaker::Lex)));
        }
        if let Some(rest) = s.strip_prefix("mfp:") {
            let backup = TieBreaker::parse(rest)?;
            if matches!(backup, TieBreaker::Mfp(_)) {
                return Err(Error::Parse("MFP backup cannot be MFP".into()));
            }
            return Ok(TieBreaker::Mfp(Box::new(backup)));
        }
        Err(Error::Parse(format!("unknown tie-breaker {s:?}")))
    }
}

impl std::fmt::Display for TieBreaker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TieBreaker::Lex => write!(f, "lex"),
            TieBreaker::FixedAgent(i) => write!(f, "agent:{i}"),
            TieBreaker::Mfp(b) => write!(f, "mfp:{b}"),
        }
    }
}

/// The ⊳-maximal element of a nonempty decision set.
pub fn lexicographic_break(d: &BTreeSet<Pref>, prio: &PriorityOrder) -> Result<Pref> {
    prio.best(d)
        .ok_or_else(|| Error::Invalid("tie-breaking over an empty set".into()))
}

/// Breaks ties by the priority induced by `agent`'s vote (1-based index),
/// which must be a full ranking; committees and partial lists cannot induce
/// a priority over the decision space.
pub fn fixed_agent_break(p: &Profile, d: &BTreeSet<Pref>, agent: usize, m: usize) -> Result<Pref> {
    let vote = p
        .votes
        .get(agent.wrapping_sub(1))
        .ok_or_else(|| Error::Invalid(format!("no agent {agent} in an n={} profile", p.n())))?;
    if !vote.is_list() || vote.size() != m {
        return Err(Error::Invalid(format!(
            "agent {agent}'s vote {vote} is not a full ranking and induces no priority"
        )));
    }
    let prio = PriorityOrder::from_ranking(vote.alts())?;
    lexicographic_break(d, &prio)
}

/// Applies a tie-breaking mechanism. MFP dispatches to the fast algorithm
/// when the profile consists of full rankings, and to the general
/// permutation scan otherwise.
pub fn break_ties(
    tb: &TieBreaker,
    p: &Profile,
    d: &BTreeSet<Pref>,
    setting: &Setting,
    prio: &PriorityOrder,
) -> Result<Pref> {
    match tb {
        TieBreaker::Lex => lexicographic_break(d, prio),
        TieBreaker::FixedAgent(i) => fixed_agent_break(p, d, *i, setting.m()),
        TieBreaker::Mfp(backup) => {
            let m = setting.m();
            let full = p.votes.iter().all(|v| v.is_list() && v.size() == m);
            if full {
                mfp_fast(p, d, backup, setting, prio)
            } else {
                mfp_general(p, d, backup, setting, prio)
            }
        }
    }
}

/// MFP tie-breaking for full-ranking profiles, in polynomial time.
///
/// The most favorable permutations are exactly those mapping some most
/// popular ranking onto the priority ranking, so only `|MPR(P)|` candidates
/// need comparing instead of all m!.
pub fn mfp_fast(
    p: &Profile,
    d: &BTreeSet<Pref>,
    backup: &TieBreaker,
    setting: &Setting,
    prio: &PriorityOrder,
) -> Result<Pref> {
    let run = mfp_fast_run(p, setting, prio)?;
    finish_mfp(run, p, d, backup, setting, prio)
}

/// MFP tie-breaking for arbitrary preference spaces: scans all m!
/// permutations for the one lifting the histogram highest.
pub fn mfp_general(
    p: &Profile,
    d: &BTreeSet<Pref>,
    backup: &TieBreaker,
    setting: &Setting,
    prio: &PriorityOrder,
) -> Result<Pref> {
    let run = mfp_general_run(p, setting, prio)?;
    finish_mfp(run, p, d, backup, setting, prio)
}

/// Everything the MFP algorithms compute before looking at `D`; also used by
/// the CLI's `--explain` output.
#[derive(Clone, Debug)]
pub struct MfpRun {
    pub stab: PermGroup,
    /// Fixed points of the stabilizer in the whole decision space.
    pub fixed: BTreeSet<Pref>,
    /// Most popular rankings (fast path only).
    pub mpr: Vec<Pref>,
    /// The most popular ranking whose induced permutation won (fast path).
    pub r_star: Option<Pref>,
    /// The most favorable permutation used for relabeling.
    pub sigma: Perm,
}

fn mfp_fast_run(p: &Profile, setting: &Setting, prio: &PriorityOrder) -> Result<MfpRun> {
    let m = setting.m();
    let h = p.histogram();
    let stab = stab_histogram(&h, m)?;
    let fixed: BTreeSet<Pref> = stab
        .fixed_points(&setting.dec_space)
        .into_iter()
        .collect();
    let max_count = h.iter().map(|(_, c)| c).max().expect("nonempty");
    let mpr: Vec<Pref> = h
        .iter()
        .filter(|&(_, c)| c == max_count)
        .map(|(r, _)| r.clone())
        .collect();
    let base = Pref::list(prio.base().to_vec());
    let mut best: Option<(Pref, Perm, Histogram)> = None;
    for r in &mpr {
        let sigma = perm_mapping_ranking(r, &base);
        let image = h.apply(&sigma);
        // keep the first maximum: MPR iterates in priority order, so ties
        // resolve to the ⊳-highest ranking deterministically
        let better = match &best {
            None => true,
            Some((_, _, cur)) => prio.cmp_histograms(&image, cur) == std::cmp::Ordering::Greater,
        };
        if better {
            best = Some((r.clone(), sigma, image));
        }
    }
    let (r_star, sigma, _) = best.expect("MPR nonempty");
    Ok(MfpRun {
        stab,
        fixed,
        mpr,
        r_star: Some(r_star),
        sigma,
    })
}

fn mfp_general_run(p: &Profile, setting: &Setting, prio: &PriorityOrder) -> Result<MfpRun> {
    let m = setting.m();
    if m > MAX_M {
        return Err(Error::Budget(format!(
            "general MFP scans m! permutations; m <= {MAX_M} required"
        )));
    }
    let h = p.histogram();
    let stab = stab_histogram(&h, m)?;
    let fixed: BTreeSet<Pref> = stab
        .fixed_points(&setting.dec_space)
        .into_iter()
        .collect();
    let mut best: Option<(Perm, Histogram)> = None;
    for sigma in Perm::all(m) {
        let image = h.apply(&sigma);
        let better = match &best {
            None => true,
            Some((_, cur)) => prio.cmp_histograms(&image, cur) == std::cmp::Ordering::Greater,
        };
        if better {
            best = Some((sigma, image));
        }
    }
    let (sigma, _) = best.expect("S_m nonempty");
    Ok(MfpRun {
        stab,
        fixed,
        mpr: Vec::new(),
        r_star: None,
        sigma,
    })
}

fn finish_mfp(
    run: MfpRun,
    p: &Profile,
    d: &BTreeSet<Pref>,
    backup: &TieBreaker,
    setting: &Setting,
    prio: &PriorityOrder,
) -> Result<Pref> {
    if d.is_empty() {
        return Err(Error::Invalid("tie-breaking over an empty set".into()));
    }
    let fpd: Vec<&Pref> = d.iter().filter(|x| run.fixed.contains(*x)).collect();
    if fpd.is_empty() {
        return break_ties(backup, p, d, setting, prio);
    }
    Ok(fpd
        .into_iter()
        .max_by(|a, b| prio.cmp_prefs(&run.sigma.apply_pref(a), &run.sigma.apply_pref(b)))
        .expect("nonempty")
        .clone())
}

/// The resolute rule `tb ∗ rule`: evaluates the irresolute rule, then breaks
/// the tie. The result always lies in the winning set.
pub fn resolve(
    rule: &RuleSpec,
    tb: &TieBreaker,
    p: &Profile,
    setting: &Setting,
    prio: &PriorityOrder,
) -> Result<Pref> {
    let winners = evaluate(rule, &p.histogram(), setting)?;
    break_ties(tb, p, &winners, setting, prio)
}

/// Full trace of one resolution, for diagnostics.
#[derive(Clone, Debug)]
pub struct Explanation {
    pub winners: BTreeSet<Pref>,
    pub stab: PermGroup,
    pub fpd: BTreeSet<Pref>,
    pub mpr: Vec<Pref>,
    pub r_star: Option<Pref>,
    pub sigma: Option<Perm>,
    pub backup_fired: bool,
    pub decision: Pref,
}

/// Like [`resolve`] with MFP tie-breaking, but reporting every intermediate
/// quantity.
pub fn resolve_explain(
    rule: &RuleSpec,
    tb: &TieBreaker,
    p: &Profile,
    setting: &Setting,
    prio: &PriorityOrder,
) -> Result<Explanation> {
    let winners = evaluate(rule, &p.histogram(), setting)?;
    let decision = break_ties(tb, p, &winners, setting, prio)?;
    let (stab, fpd, mpr, r_star, sigma, backup_fired) = if matches!(tb, TieBreaker::Mfp(_)) {
        let m = setting.m();
        let full = p.votes.iter().all(|v| v.is_list() && v.size() == m);
        let run = if full {
            mfp_fast_run(p, setting, prio)?
        } else {
            mfp_general_run(p, setting, prio)?
        };
        let fpd: BTreeSet<Pref> = winners
            .iter()
            .filter(|x| run.fixed.contains(*x))
            .cloned()
            .collect();
        let backup_fired = fpd.is_empty();
        (run.stab, fpd, run.mpr, run.r_star, Some(run.sigma), backup_fired)
    } else {
        let stab = stab_histogram(&p.histogram(), setting.m())?;
        let fpd = fpd_from_stab(&stab, &winners);
        (stab, fpd, Vec::new(), None, None, false)
    };
    Ok(Explanation {
        winners,
        stab,
        fpd,
        mpr,
        r_star,
        sigma,
        backup_fired,
        decision,
    })
}

/// Whether a profile (given as a histogram) is problematic for `rule`: no
/// refinement of the rule can be simultaneously anonymous, neutral, and
/// resolute there, because no winning decision is fixed by the histogram's
/// stabilizer.
pub fn is_problematic(h: &Histogram, rule: &RuleSpec, setting: &Setting) -> Result<bool> {
    let winners = evaluate(rule, h, setting)?;
    let stab = stab_histogram(h, setting.m())?;
    if stab.is_trivial() {
        return Ok(false);
    }
    Ok(fpd_from_stab(&stab, &winners).is_empty())
}

/// For a problematic profile, a stabilizer σ that moves the resolved
/// decision — the certificate that anonymity and neutrality cannot both
/// hold. Returns `None` when the profile is not problematic.
pub fn problematic_witness(
    rule: &RuleSpec,
    tb: &TieBreaker,
    p: &Profile,
    setting: &Setting,
    prio: &PriorityOrder,
) -> Result<Option<Perm>> {
    let h = p.histogram();
    if !is_problematic(&h, rule, setting)? {
        return Ok(None);
    }
    let decision = resolve(rule, tb, p, setting, prio)?;
    let stab = stab_histogram(&h, setting.m())?;
    Ok(stab
        .elements()
        .iter()
        .find(|s| s.apply_pref(&decision) != decision)
        .cloned())
}

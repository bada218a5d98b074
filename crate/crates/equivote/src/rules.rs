//! Irresolute voting rules: mappings from profiles (via their histograms, so
//! anonymity holds by construction) to nonempty sets of decisions, plus the
//! canceling-out and δ-unanimity property checkers.
//!
//! Score-based rules (positional scoring, Copeland, maximin, approval) share
//! one extension scheme for multi-decision spaces: a k-list wins iff its
//! entries are ordered by non-increasing score and no outsider scores above
//! its last entry; a k-committee wins iff its weakest member scores at least
//! as high as the strongest outsider. The committee version of every rule
//! thus consists of exactly the unordered versions of its list winners.
//! Ranked pairs and STV use parallel-universes tie-breaking (PUT): the output
//! is the union over every way of breaking internal ties.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::prefs::{Alt, Histogram, Pref, Setting, Space, SpaceKind};
use crate::{Error, Result};

/// Branch cap for PUT enumeration.
const PUT_CAP: usize = 1_000_000;

/// A rule together with its parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RuleSpec {
    /// Positional scoring with an explicit non-increasing integer vector.
    Scoring(Vec<i64>),
    Plurality,
    Borda,
    Veto,
    /// Copeland with rational tie value α = num/den ∈ [0,1].
    Copeland { num: i64, den: i64 },
    Maximin,
    RankedPairs,
    Schulze,
    Stv,
    Approval,
    /// Outputs the entire decision space regardless of the profile.
    Trivial,
}

impl RuleSpec {
    /// Parses `"plurality"`, `"borda"`, `"veto"`, `"scoring:4,2,1,0"`,
    /// `"copeland:0.5"`, `"maximin"`, `"rankedpairs"`, `"schulze"`, `"stv"`,
    /// `"approval"`, `"trivial"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "plurality" => return Ok(RuleSpec::Plurality),
            "borda" => return Ok(RuleSpec::Borda),
            "veto" => return Ok(RuleSpec::Veto),
            "maximin" => return Ok(RuleSpec::Maximin),
            "rankedpairs" => return Ok(RuleSpec::RankedPairs),
            "schulze" => return Ok(RuleSpec::Schulze),
            "stv" => return Ok(RuleSpec::Stv),
            "approval" => return Ok(RuleSpec::Approval),
            "trivial" => return Ok(RuleSpec::Trivial),
            "copeland" => return Ok(RuleSpec::Copeland { num: 1, den: 2 }),
            _ => {}
        }
        if let Some(v) = s.strip_prefix("scoring:") {
            let vec: Vec<i64> = v
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad score {t:?}")))
                })
                .collect::<Result<_>>()?;
            if vec.len() < 2 || vec.windows(2).any(|w| w[0] < w[1]) || vec[0] == vec[vec.len() - 1]
            {
                return Err(Error::Parse(
                    "scoring vector must be non-increasing with s1 > sm".into(),
                ));
            }
            return Ok(RuleSpec::Scoring(vec));
        }
        if let Some(a) = s.strip_prefix("copeland:") {
            let (num, den) = parse_rational(a.trim())?;
            if num < 0 || num > den {
                return Err(Error::Parse(format!("copeland alpha {a:?} not in [0,1]")));
            }
            return Ok(RuleSpec::Copeland { num, den });
        }
        Err(Error::Parse(format!("unknown rule {s:?}")))
    }

    /// The scoring vector for positional rules, instantiated at `m`.
    fn scoring_vector(&self, m: usize) -> Option<Vec<i64>> {
        match self {
            RuleSpec::Scoring(v) => Some(v.clone()),
            RuleSpec::Plurality => {
                let mut v = vec![0; m];
                v[0] = 1;
                Some(v)
            }
            RuleSpec::Borda => Some((0..m).rev().map(|x| x as i64).collect()),
            RuleSpec::Veto => {
                let mut v = vec![1; m];
                v[m - 1] = 0;
                Some(v)
            }
            _ => None,
        }
    }

    /// Whether this rule consumes full-ranking profiles (as opposed to
    /// committee profiles, or anything at all).
    pub fn needs_full_rankings(&self) -> bool {
        !matches!(self, RuleSpec::Approval | RuleSpec::Trivial)
    }
}

impl std::fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RuleSpec::Scoring(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "scoring:{}", parts.join(","))
            }
            RuleSpec::Plurality => write!(f, "plurality"),
            RuleSpec::Borda => write!(f, "borda"),
            RuleSpec::Veto => write!(f, "veto"),
            RuleSpec::Copeland { num, den } => write!(f, "copeland:{num}/{den}"),
            RuleSpec::Maximin => write!(f, "maximin"),
            RuleSpec::RankedPairs => write!(f, "rankedpairs"),
            RuleSpec::Schulze => write!(f, "schulze"),
            RuleSpec::Stv => write!(f, "stv"),
            RuleSpec::Approval => write!(f, "approval"),
            RuleSpec::Trivial => write!(f, "trivial"),
        }
    }
}

fn parse_rational(s: &str) -> Result<(i64, i64)> {
    if let Some((n, d)) = s.split_once('/') {
        let num = n
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad numerator {n:?}")))?;
        let den = d
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad denominator {d:?}")))?;
        if den <= 0 {
            return Err(Error::Parse("denominator must be positive".into()));
        }
        return Ok((num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits == 0 || digits > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let den = 10i64.pow(digits);
        let whole = if int.is_empty() {
            0
        } else {
            int.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?
        };
        let num = whole * den + frac.parse::<i64>().unwrap();
        return Ok((num, den));
    }
    let whole = s
        .parse::<i64>()
        .map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
    Ok((whole, 1))
}

// ---------------------------------------------------------------------------
// Weighted majority graph
// ---------------------------------------------------------------------------

/// The weighted majority graph of a full-ranking histogram:
/// `w[a-1][b-1]` = (votes with a≻b) − (votes with b≻a).
pub fn wmg(h: &Histogram, m: usize) -> Result<Vec<Vec<i64>>> {
    let mut w = vec![vec![0i64; m]; m];
    for (r, c) in h.iter() {
        if !r.is_list() || r.size() != m {
            return Err(Error::Invalid("WMG needs full-ranking votes".into()));
        }
        let alts = r.alts();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (alts[i] as usize - 1, alts[j] as usize - 1);
                w[a][b] += c as i64;
                w[b][a] -= c as i64;
            }
        }
    }
    Ok(w)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluates `rule` on the histogram of a profile, returning the winning set
/// of decisions in `setting.dec_space`.
pub fn evaluate(rule: &RuleSpec, h: &Histogram, setting: &Setting) -> Result<BTreeSet<Pref>> {
    let m = setting.m();
    if h.n() == 0 {
        return Err(Error::Invalid("empty profile".into()));
    }
    check_input_space(rule, h, setting)?;
    let out = match rule {
        RuleSpec::Trivial => setting.dec_space.enumerate().into_iter().collect(),
        RuleSpec::Approval => {
            let mut scores = vec![0i64; m];
            for (v, c) in h.iter() {
                for &a in v.alts() {
                    scores[a as usize - 1] += c as i64;
                }
            }
            winners_by_score(&scores, &setting.dec_space)
        }
        RuleSpec::Scoring(_) | RuleSpec::Plurality | RuleSpec::Borda | RuleSpec::Veto => {
            let s = rule.scoring_vector(m).expect("positional rule");
            if s.len() != m {
                return Err(Error::Invalid(format!(
                    "scoring vector has {} entries for m={m}",
                    s.len()
                )));
            }
            let mut scores = vec![0i64; m];
            for (r, c) in h.iter() {
                for (pos, &a) in r.alts().iter().enumerate() {
                    scores[a as usize - 1] += s[pos] * c as i64;
                }
            }
            winners_by_score(&scores, &setting.dec_space)
        }
        RuleSpec::Copeland { num, den } => {
            let w = wmg(h, m)?;
            // score = wins·den + ties·num, an exact integer proxy for
            // wins + ties·α on the common denominator.
            let scores: Vec<i64> = (0..m)
                .map(|a| {
                    let wins = (0..m).filter(|&b| w[a][b] > 0).count() as i64;
                    let ties = (0..m).filter(|&b| b != a && w[a][b] == 0).count() as i64;
                    wins * den + ties * num
                })
                .collect();
            winners_by_score(&scores, &setting.dec_space)
        }
        RuleSpec::Maximin => {
            let w = wmg(h, m)?;
            let scores: Vec<i64> = (0..m)
                .map(|a| {
                    (0..m)
                        .filter(|&b| b != a)
                        .map(|b| w[a][b])
                        .min()
                        .unwrap_or(0)
                })
                .collect();
            winners_by_score(&scores, &setting.dec_space)
        }
        RuleSpec::RankedPairs => {
            let rankings = ranked_pairs_rankings(&wmg(h, m)?)?;
            winners_from_rankings(&rankings, &setting.dec_space)
        }
        RuleSpec::Schulze => {
            let rankings = schulze_rankings(&wmg(h, m)?);
            winners_from_rankings(&rankings, &setting.dec_space)
        }
        RuleSpec::Stv => {
            let rankings = stv_rankings(h, m)?;
            winners_from_rankings(&rankings, &setting.dec_space)
        }
    };
    debug_assert!(!out.is_empty());
    Ok(out)
}

fn check_input_space(rule: &RuleSpec, h: &Histogram, setting: &Setting) -> Result<()> {
    match rule {
        RuleSpec::Trivial => Ok(()),
        RuleSpec::Approval => {
            if h.iter().all(|(v, _)| !v.is_list()) {
                Ok(())
            } else {
                Err(Error::Invalid("approval needs committee votes".into()))
            }
        }
        _ => {
            let m = setting.m();
            if h.iter().all(|(v, _)| v.is_list() && v.size() == m) {
                Ok(())
            } else {
                Err(Error::Invalid(format!("{rule} needs full-ranking votes")))
            }
        }
    }
}

/// Winning decisions for an alternative-scored rule: lists ordered by
/// non-increasing score with no outsider above the last entry; committees
/// whose weakest member is at least every outsider.
fn winners_by_score(scores: &[i64], dec_space: &Space) -> BTreeSet<Pref> {
    dec_space
        .enumerate()
        .into_iter()
        .filter(|d| {
            let members = d.alts();
            let sc = |a: Alt| scores[a as usize - 1];
            let ordered = match d {
                Pref::List(v) => v.windows(2).all(|w| sc(w[0]) >= sc(w[1])),
                Pref::Committee(_) => true,
            };
            let cutoff = members.iter().map(|&a| sc(a)).min().expect("nonempty");
            let member_set: BTreeSet<Alt> = members.iter().copied().collect();
            let no_better_outsider = (1..=scores.len() as Alt)
                .filter(|a| !member_set.contains(a))
                .all(|a| sc(a) <= cutoff);
            ordered && no_better_outsider
        })
        .collect()
}

/// Top-k prefixes (as lists or committees) of a set of full rankings.
fn winners_from_rankings(rankings: &BTreeSet<Vec<Alt>>, dec_space: &Space) -> BTreeSet<Pref> {
    let k = dec_space.max_size;
    rankings
        .iter()
        .map(|r| match dec_space.kind {
            SpaceKind::List => Pref::list(r[..k].to_vec()),
            SpaceKind::Committee => Pref::committee(r[..k].to_vec()),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Ranked pairs (PUT)
// ---------------------------------------------------------------------------

/// All full rankings reachable by fixing WMG edges (every directed edge,
/// positive, zero, or negative weight) in some non-increasing weight order,
/// skipping an edge whenever it would close a cycle.
#[allow(clippy::needless_range_loop)] // a/b/x index square weight matrices
fn ranked_pairs_rankings(w: &[Vec<i64>]) -> Result<BTreeSet<Vec<Alt>>> {
    let m = w.len();
    // Tiers of equal-weight directed edges, heaviest first.
    let mut by_weight: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..m {
        for b in 0..m {
            if a != b {
                by_weight.entry(-w[a][b]).or_default().push((a, b));
            }
        }
    }
    let tiers: Vec<Vec<(usize, usize)>> = by_weight.into_values().collect();

    // State: (tier index, edges of that tier still unconsidered, reachability
    // closure of the fixed edges as row bitmasks).
    type State = (usize, Vec<(usize, usize)>, Vec<u16>);
    let mut seen: HashSet<State> = HashSet::new();
    let mut stack: Vec<State> = vec![(0, tiers[0].clone(), vec![0u16; m])];
    let mut out = BTreeSet::new();
    while let Some((ti, remaining, reach)) = stack.pop() {
        if seen.len() > PUT_CAP {
            return Err(Error::Budget("ranked-pairs universe cap exceeded".into()));
        }
        // Edges whose addition closes a cycle are rejected whenever they are
        // considered, so their position in the order is irrelevant.
        let live: Vec<(usize, usize)> = remaining
            .iter()
            .copied()
            .filter(|&(a, b)| reach[b] & (1 << a) == 0)
            .collect();
        if live.is_empty() {
            if ti + 1 < tiers.len() {
                let next = (ti + 1, tiers[ti + 1].clone(), reach);
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            } else {
                out.insert(ranking_from_reach(&reach));
            }
            continue;
        }
        for &(a, b) in &live {
            let mut r = reach.clone();
            // fix a→b and close transitively: everything reaching a (plus a)
            // now reaches everything b reaches (plus b).
            let forward = r[b] | (1 << b);
            for x in 0..m {
                if x == a || r[x] & (1 << a) != 0 {
                    r[x] |= forward;
                }
            }
            let rest: Vec<(usize, usize)> =
                remaining.iter().copied().filter(|&e| e != (a, b)).collect();
            let next = (ti, rest, r);
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    Ok(out)
}

/// Converts a complete reachability relation into the ranking it encodes.
fn ranking_from_reach(reach: &[u16]) -> Vec<Alt> {
    let m = reach.len();
    let mut alts: Vec<Alt> = (1..=m as Alt).collect();
    alts.sort_by_key(|&a| m - reach[a as usize - 1].count_ones() as usize);
    debug_assert!({
        let counts: BTreeSet<u32> = reach.iter().map(|r| r.count_ones()).collect();
        counts.len() == m
    });
    alts
}

// ---------------------------------------------------------------------------
// Schulze
// ---------------------------------------------------------------------------

/// All linear extensions of the Schulze beat-path relation ≽.
fn schulze_rankings(w: &[Vec<i64>]) -> BTreeSet<Vec<Alt>> {
    use itertools::Itertools;
    let m = w.len();
    // Widest-path strengths via Floyd–Warshall, seeded with direct weights.
    let mut s: Vec<Vec<i64>> = w.to_vec();
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                if a != b && a != c && b != c {
                    s[a][b] = s[a][b].max(s[a][c].min(s[c][b]));
                }
            }
        }
    }
    // a ≽ b iff s[a][b] ≥ s[b][a]; a ranking is admissible iff it never
    // places b above a while a strictly beats b.
    (1..=m as Alt)
        .permutations(m)
        .filter(|perm| {
            perm.iter().enumerate().all(|(i, &a)| {
                perm[i + 1..].iter().all(|&b| {
                    s[a as usize - 1][b as usize - 1] >= s[b as usize - 1][a as usize - 1]
                })
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// STV (PUT)
// ---------------------------------------------------------------------------

/// All full rankings produced by iterated elimination of a lowest-plurality
/// alternative, branching on every tie; the ranking is the inverse
/// elimination order.
fn stv_rankings(h: &Histogram, m: usize) -> Result<BTreeSet<Vec<Alt>>> {
    let votes: Vec<(&[Alt], u64)> = h.iter().map(|(r, c)| (r.alts(), c)).collect();
    let mut memo: HashMap<u16, BTreeSet<Vec<Alt>>> = HashMap::new();
    let full: u16 = (1 << m) - 1;
    // recursion yields [survivor, …, first eliminated]; the ranking is the
    // inverse elimination order, i.e. exactly that sequence
    stv_rec(full, &votes, &mut memo)
}

fn stv_rec(
    remaining: u16,
    votes: &[(&[Alt], u64)],
    memo: &mut HashMap<u16, BTreeSet<Vec<Alt>>>,
) -> Result<BTreeSet<Vec<Alt>>> {
    if let Some(r) = memo.get(&remaining) {
        return Ok(r.clone());
    }
    let alive: Vec<Alt> = (0..16)
        .filter(|i| remaining & (1 << i) != 0)
        .map(|i| (i + 1) as Alt)
        .collect();
    if alive.len() == 1 {
        return Ok([vec![alive[0]]].into());
    }
    let mut scores: BTreeMap<Alt, u64> = alive.iter().map(|&a| (a, 0)).collect();
    for &(r, c) in votes {
        if let Some(&top) = r.iter().find(|&&a| remaining & (1 << (a - 1)) != 0) {
            *scores.get_mut(&top).unwrap() += c;
        }
    }
    let min = *scores.values().min().expect("nonempty");
    let mut out = BTreeSet::new();
    for (&a, _) in scores.iter().filter(|&(_, &s)| s == min) {
        let sub = stv_rec(remaining & !(1 << (a - 1)), votes, memo)?;
        for mut r in sub {
            r.push(a);
            out.insert(r);
        }
        if out.len() > PUT_CAP {
            return Err(Error::Budget("STV universe cap exceeded".into()));
        }
    }
    memo.insert(remaining, out.clone());
    Ok(out)
}

// ---------------------------------------------------------------------------
// Property checkers
// ---------------------------------------------------------------------------

/// Canceling-out: adding one copy of every full ranking leaves the winning
/// set unchanged.
pub fn check_canceling_out(rule: &RuleSpec, h: &Histogram, setting: &Setting) -> Result<bool> {
    let saturated = h.saturate(&Space::full_rankings(setting.m())?, 1);
    Ok(evaluate(rule, h, setting)? == evaluate(rule, &saturated, setting)?)
}

/// δ-unanimity: given a set `a` of alternatives that at least (1−δ)·n votes
/// rank strictly above everything else, checks that every winning decision
/// uses only alternatives from `a`. Errors if the precondition fails (that
/// signals a bad test instance, not a rule failure).
pub fn check_delta_unanimity(
    rule: &RuleSpec,
    delta: f64,
    a: &BTreeSet<Alt>,
    h: &Histogram,
    setting: &Setting,
) -> Result<bool> {
    let n = h.n();
    let top_votes: u64 = h
        .iter()
        .filter(|(r, _)| {
            r.alts()[..a.len()]
                .iter()
                .all(|x| a.contains(x))
        })
        .map(|(_, c)| c)
        .sum();
    if (top_votes as f64) < (1.0 - delta) * n as f64 {
        return Err(Error::Invalid(format!(
            "only {top_votes}/{n} votes rank the target set on top; need (1-{delta})n"
        )));
    }
    let winners = evaluate(rule, h, setting)?;
    Ok(winners
        .iter()
        .all(|d| d.alts().iter().all(|x| a.contains(x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::{profile_minus, profile_plus, Profile};

    fn lists(m: usize, k: usize) -> Setting {
        Setting::new(Space::lists(m, m).unwrap(), Space::lists(m, k).unwrap()).unwrap()
    }

    fn singletons(alts: &[Alt]) -> BTreeSet<Pref> {
        alts.iter().map(|&a| Pref::list(vec![a])).collect()
    }

    fn cycle3() -> Histogram {
        Profile::parse("1>2>3\n2>3>1\n3>1>2").unwrap().histogram()
    }

    #[test]
    fn rule_spec_parsing() {
        assert_eq!(RuleSpec::parse("plurality").unwrap(), RuleSpec::Plurality);
        assert_eq!(
            RuleSpec::parse("scoring:4,2,1,0").unwrap(),
            RuleSpec::Scoring(vec![4, 2, 1, 0])
        );
        assert_eq!(
            RuleSpec::parse("copeland:0.5").unwrap(),
            RuleSpec::Copeland { num: 5, den: 10 }
        );
        assert_eq!(
            RuleSpec::parse("copeland").unwrap(),
            RuleSpec::Copeland { num: 1, den: 2 }
        );
        assert!(RuleSpec::parse("scoring:1,2,3").is_err());
        assert!(RuleSpec::parse("copeland:1.5").is_err());
        assert!(RuleSpec::parse("bogus").is_err());
    }

    #[test]
    fn veto_on_reference_profiles() {
        let st = lists(5, 1);
        assert_eq!(
            evaluate(&RuleSpec::Veto, &profile_minus().histogram(), &st).unwrap(),
            singletons(&[1, 2])
        );
        assert_eq!(
            evaluate(&RuleSpec::Veto, &profile_plus().histogram(), &st).unwrap(),
            singletons(&[1, 2, 3, 4])
        );
    }

    #[test]
    fn plurality_unanimous_top() {
        let st = lists(4, 1);
        let h = Profile::parse("3 x 1>2>3>4").unwrap().histogram();
        assert_eq!(
            evaluate(&RuleSpec::Plurality, &h, &st).unwrap(),
            singletons(&[1])
        );
    }

    #[test]
    fn wmg_values() {
        let h = Profile::parse("1>2>3\n1>2>3").unwrap().histogram();
        let w = wmg(&h, 3).unwrap();
        assert_eq!((w[0][1], w[0][2], w[1][2]), (2, 2, 2));
        assert_eq!(w[1][0], -2);

        let h2 = Profile::parse("1>2\n2>1").unwrap().histogram();
        assert_eq!(wmg(&h2, 2).unwrap()[0][1], 0);

        let wp = wmg(&profile_plus().histogram(), 5).unwrap();
        assert_eq!(wp[2][3], 2);
    }

    #[test]
    fn copeland_variants() {
        let st = lists(3, 1);
        // Condorcet winner
        let h = Profile::parse("1>2>3\n1>3>2\n2>1>3").unwrap().histogram();
        assert_eq!(
            evaluate(&RuleSpec::Copeland { num: 1, den: 2 }, &h, &st).unwrap(),
            singletons(&[1])
        );
        // perfect tie, m=2
        let h2 = Profile::parse("1>2\n2>1").unwrap().histogram();
        assert_eq!(
            evaluate(&RuleSpec::Copeland { num: 1, den: 2 }, &h2, &lists(2, 1)).unwrap(),
            singletons(&[1, 2])
        );
        // 3-cycle, alpha = 1
        assert_eq!(
            evaluate(&RuleSpec::Copeland { num: 1, den: 1 }, &cycle3(), &st).unwrap(),
            singletons(&[1, 2, 3])
        );
    }

    #[test]
    fn condorcet_consistent_rules_agree() {
        let h = Profile::parse("2>1>3\n2>3>1\n1>2>3").unwrap().histogram();
        let st = lists(3, 1);
        for rule in [RuleSpec::Maximin, RuleSpec::RankedPairs, RuleSpec::Schulze] {
            assert_eq!(
                evaluate(&rule, &h, &st).unwrap(),
                singletons(&[2]),
                "{rule}"
            );
        }
    }

    #[test]
    fn tied_two_alternative_profiles() {
        let h = Profile::parse("1>2\n2>1").unwrap().histogram();
        let st = lists(2, 1);
        for rule in [
            RuleSpec::Maximin,
            RuleSpec::RankedPairs,
            RuleSpec::Schulze,
            RuleSpec::Stv,
        ] {
            assert_eq!(
                evaluate(&rule, &h, &st).unwrap(),
                singletons(&[1, 2]),
                "{rule}"
            );
        }
    }

    #[test]
    fn cycle_profile_outputs() {
        let st1 = lists(3, 1);
        let st3 = lists(3, 3);
        for rule in [
            RuleSpec::Maximin,
            RuleSpec::RankedPairs,
            RuleSpec::Schulze,
            RuleSpec::Stv,
        ] {
            assert_eq!(
                evaluate(&rule, &cycle3(), &st1).unwrap(),
                singletons(&[1, 2, 3]),
                "{rule}"
            );
        }
        // ranked pairs on the cycle: exactly the three rotations survive
        let rp = evaluate(&RuleSpec::RankedPairs, &cycle3(), &st3).unwrap();
        assert_eq!(
            rp,
            [
                Pref::list(vec![1, 2, 3]),
                Pref::list(vec![2, 3, 1]),
                Pref::list(vec![3, 1, 2])
            ]
            .into()
        );
        // Schulze ties everything on the symmetric cycle
        assert_eq!(
            evaluate(&RuleSpec::Schulze, &cycle3(), &st3).unwrap().len(),
            6
        );
    }

    #[test]
    fn stv_elimination_order() {
        // 3×1>2>3, 3×2>3>1, 1×3>2>1: 3 is eliminated first (plurality 1),
        // its vote transfers to 2, and 2 then beats 1 by 4 to 3.
        let h = Profile::parse("3 x 1>2>3\n3 x 2>3>1\n3>2>1")
            .unwrap()
            .histogram();
        assert_eq!(
            evaluate(&RuleSpec::Stv, &h, &lists(3, 1)).unwrap(),
            singletons(&[2])
        );
        assert_eq!(
            evaluate(&RuleSpec::Stv, &h, &lists(3, 3)).unwrap(),
            [Pref::list(vec![2, 1, 3])].into()
        );
        // tied lowest plurality branches into parallel universes
        let tied = Profile::parse("3 x 1>2>3\n2 x 2>3>1\n2 x 3>2>1")
            .unwrap()
            .histogram();
        assert_eq!(
            evaluate(&RuleSpec::Stv, &tied, &lists(3, 1)).unwrap(),
            singletons(&[2, 3])
        );
    }

    #[test]
    fn approval_scores() {
        // 2×{2} + {3} + 2×{1,3} + {2,4}: approval scores 2,3,3,1.
        let h = Profile::parse("2 x {2}\n{3}\n2 x {1,3}\n{2,4}")
            .unwrap()
            .histogram();
        let st = Setting::new(
            Space::committees_up_to(4, 2).unwrap(),
            Space::lists(4, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(
            evaluate(&RuleSpec::Approval, &h, &st).unwrap(),
            singletons(&[2, 3])
        );
    }

    #[test]
    fn trivial_rule_outputs_whole_space() {
        let h = Profile::parse("1>2>3").unwrap().histogram();
        let st = Setting::new(Space::lists(3, 3).unwrap(), Space::committees(3, 2).unwrap())
            .unwrap();
        assert_eq!(evaluate(&RuleSpec::Trivial, &h, &st).unwrap().len(), 3);
        let st2 = lists(3, 2);
        assert_eq!(evaluate(&RuleSpec::Trivial, &h, &st2).unwrap().len(), 6);
    }

    #[test]
    fn committee_outputs_are_unordered_list_outputs() {
        let h = profile_plus().histogram();
        for rule in [
            RuleSpec::Borda,
            RuleSpec::Copeland { num: 1, den: 2 },
            RuleSpec::Maximin,
            RuleSpec::RankedPairs,
            RuleSpec::Schulze,
            RuleSpec::Stv,
        ] {
            let st_l = lists(5, 2);
            let st_c =
                Setting::new(Space::lists(5, 5).unwrap(), Space::committees(5, 2).unwrap())
                    .unwrap();
            let from_lists: BTreeSet<Pref> = evaluate(&rule, &h, &st_l)
                .unwrap()
                .into_iter()
                .map(|p| Pref::committee(p.alts().to_vec()))
                .collect();
            assert_eq!(evaluate(&rule, &h, &st_c).unwrap(), from_lists, "{rule}");
        }
    }

    #[test]
    fn canceling_out_on_small_profiles() {
        let st = lists(3, 1);
        for rule in [RuleSpec::Borda, RuleSpec::Plurality, RuleSpec::Veto] {
            assert!(check_canceling_out(&rule, &cycle3(), &st).unwrap(), "{rule}");
            let h = Profile::parse("1>2>3\n1>3>2").unwrap().histogram();
            assert!(check_canceling_out(&rule, &h, &st).unwrap(), "{rule}");
        }
    }

    #[test]
    fn delta_unanimity_checks() {
        // 7 of 8 votes put {1} on top; Borda with delta just under the
        // threshold must elect from {1}.
        let h = Profile::parse("7 x 1>2>3\n2>3>1").unwrap().histogram();
        let st = lists(3, 1);
        let a: BTreeSet<Alt> = [1].into();
        assert!(check_delta_unanimity(&RuleSpec::Borda, 0.2, &a, &h, &st).unwrap());
        // entire alternative set: vacuously true
        let all: BTreeSet<Alt> = [1, 2, 3].into();
        assert!(check_delta_unanimity(&RuleSpec::Stv, 0.9, &all, &h, &st).unwrap());
        // precondition violation is an error
        let b: BTreeSet<Alt> = [2].into();
        assert!(check_delta_unanimity(&RuleSpec::Borda, 0.05, &b, &h, &st).is_err());
    }
}

//! Brute-force ground truth for small instances.
//!
//! Everything here recomputes, by exhaustive enumeration, facts the rest of
//! the crate derives in closed form: whether a problematic histogram exists
//! at (setting, n), whether a rule + tie-breaker really is anonymous and
//! neutral wherever that is achievable, and whether the three independent
//! impossibility tests (partition condition, histogram scan, subgroup scan)
//! agree on a grid.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::groups::{fpd_from_stab, stab_histogram};
use crate::impossibility::{anr_impossible, condition1_holds};
use crate::prefs::{Histogram, Perm, Pref, PriorityOrder, Profile, Setting, Space};
use crate::rules::RuleSpec;
use crate::tiebreak::{is_problematic, problematic_witness, resolve, TieBreaker};
use crate::{Error, Result};

/// Hard limits on brute-force enumeration. Exceeding a limit is an error,
/// never a silent truncation.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationBudget {
    pub max_histograms: u64,
    pub max_groups: u64,
    pub max_permutations: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_histograms: 10_000_000,
            max_groups: 10_000,
            max_permutations: 40_320, // 8!
        }
    }
}

impl EnumerationBudget {
    /// Default budget, with `EQUIVOTE_BUDGET` (if set) overriding the
    /// histogram limit.
    pub fn from_env() -> Self {
        let mut b = EnumerationBudget::default();
        if let Ok(v) = std::env::var("EQUIVOTE_BUDGET") {
            if let Ok(n) = v.trim().parse::<u64>() {
                b.max_histograms = n;
            }
        }
        b
    }
}

/// Number of histograms of n votes over k distinct options:
/// C(n + k − 1, k − 1). `None` on overflow.
pub fn histogram_count(n: u64, k: usize) -> Option<u64> {
    let mut acc: u128 = 1;
    let k = k as u128 - 1;
    for i in 1..=k {
        acc = acc.checked_mul(n as u128 + i)?;
        acc /= i; // exact: product of j consecutive integers is divisible by j!
    }
    u64::try_from(acc).ok()
}

/// Iterates every histogram of n votes over a preference space, each exactly
/// once, in colexicographic composition order.
pub struct HistogramIter {
    prefs: Vec<Pref>,
    counts: Vec<u64>,
    n: u64,
    done: bool,
}

impl Iterator for HistogramIter {
    type Item = Histogram;

    fn next(&mut self) -> Option<Histogram> {
        if self.done {
            return None;
        }
        let k = self.counts.len();
        let item = Histogram::from_counts(
            self.prefs
                .iter()
                .zip(self.counts.iter())
                .filter(|(_, &c)| c > 0)
                .map(|(p, &c)| (p.clone(), c))
                .collect(),
        );
        if k == 1 || self.counts[k - 1] == self.n {
            self.done = true;
        } else {
            // move one unit right from the last nonzero slot before the end,
            // pulling everything at the end back with it
            let j = (0..k - 1).rfind(|&i| self.counts[i] > 0).unwrap();
            let tail = self.counts[k - 1];
            self.counts[k - 1] = 0;
            self.counts[j] -= 1;
            self.counts[j + 1] = tail + 1;
        }
        Some(item)
    }
}

/// All histograms of n votes over `space`, within budget.
pub fn enumerate_histograms(
    space: &Space,
    n: u64,
    budget: &EnumerationBudget,
) -> Result<HistogramIter> {
    if n == 0 {
        return Err(Error::Invalid("need at least one vote".into()));
    }
    let prefs = space.enumerate();
    let total = histogram_count(n, prefs.len());
    match total {
        Some(t) if t <= budget.max_histograms => {}
        _ => {
            return Err(Error::Budget(format!(
                "{:?} histograms of {n} votes over {} preferences exceeds budget {}",
                total,
                prefs.len(),
                budget.max_histograms
            )))
        }
    }
    let mut counts = vec![0u64; prefs.len()];
    counts[0] = n;
    Ok(HistogramIter {
        prefs,
        counts,
        n,
        done: false,
    })
}

/// Scans every histogram for one whose stabilizer fixes no decision. The ANR
/// impossibility holds at (setting, n) iff such a histogram exists; returns
/// it as a witness.
pub fn brute_force_anr_exists(
    setting: &Setting,
    n: u64,
    budget: &EnumerationBudget,
) -> Result<Option<Histogram>> {
    let m = setting.m();
    let decisions: BTreeSet<Pref> = setting.dec_space.enumerate().into_iter().collect();
    for h in enumerate_histograms(&setting.pref_space, n, budget)? {
        let stab = stab_histogram(&h, m)?;
        if fpd_from_stab(&stab, &decisions).is_empty() {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// One failure found by [`verify_most_equitable`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Violation {
    pub histogram: String,
    pub detail: String,
}

/// Outcome of an exhaustive anonymity/neutrality sweep.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checked: u64,
    pub problematic: u64,
    /// ANR failures on non-problematic histograms, plus any problematic
    /// histogram where no violating permutation could be exhibited. Empty
    /// means the rule + tie-breaker is as equitable as the setting allows.
    pub violations: Vec<Violation>,
}

/// Checks a resolute rule (base rule + tie-breaker) on every histogram of n
/// votes: on non-problematic histograms the decision must survive vote
/// shuffles (anonymity) and commute with every relabeling of alternatives
/// (neutrality); on problematic histograms a violating permutation must be
/// exhibitable, since there ANR is unachievable by any resolute rule.
pub fn verify_most_equitable(
    rule: &RuleSpec,
    tiebreak: &TieBreaker,
    setting: &Setting,
    n: u64,
    budget: &EnumerationBudget,
) -> Result<VerifyReport> {
    let m = setting.m();
    let sigmas = Perm::all(m);
    if sigmas.len() as u64 > budget.max_permutations {
        return Err(Error::Budget(format!(
            "{}! permutations exceeds budget {}",
            m, budget.max_permutations
        )));
    }
    let prio = PriorityOrder::default_for(m);
    let histograms: Vec<Histogram> = enumerate_histograms(&setting.pref_space, n, budget)?.collect();

    let results: Vec<Result<(bool, Vec<Violation>)>> = histograms
        .par_iter()
        .enumerate()
        .map(|(idx, h)| check_histogram(idx, h, rule, tiebreak, setting, &sigmas, &prio))
        .collect();

    let mut report = VerifyReport::default();
    for r in results {
        let (problematic, violations) = r?;
        report.checked += 1;
        report.problematic += u64::from(problematic);
        report.violations.extend(violations);
    }
    report.violations.sort();
    Ok(report)
}

fn check_histogram(
    idx: usize,
    h: &Histogram,
    rule: &RuleSpec,
    tiebreak: &TieBreaker,
    setting: &Setting,
    sigmas: &[Perm],
    prio: &PriorityOrder,
) -> Result<(bool, Vec<Violation>)> {
    let p = h.to_profile();
    let mut violations = Vec::new();
    if is_problematic(h, rule, setting)? {
        if problematic_witness(rule, tiebreak, &p, setting, prio)?.is_none() {
            violations.push(Violation {
                histogram: h.to_profile().to_string(),
                detail: "problematic histogram but no violating permutation found".into(),
            });
        }
        return Ok((true, violations));
    }
    let d = resolve(rule, tiebreak, &p, setting, prio)?;
    // anonymity: a few seeded reorderings of the same multiset of votes
    let mut rng = ChaCha8Rng::seed_from_u64(idx as u64);
    for _ in 0..3 {
        let mut votes = p.votes.clone();
        votes.shuffle(&mut rng);
        let shuffled = Profile::new(votes)?;
        let d2 = resolve(rule, tiebreak, &shuffled, setting, prio)?;
        if d2 != d {
            violations.push(Violation {
                histogram: p.to_string(),
                detail: format!("anonymity: {d} vs {d2} after reordering votes"),
            });
        }
    }
    // neutrality: relabeling alternatives must relabel the decision
    for sigma in sigmas {
        let mapped = resolve(rule, tiebreak, &p.apply(sigma), setting, prio)?;
        let expected = sigma.apply_pref(&d);
        if mapped != expected {
            violations.push(Violation {
                histogram: p.to_string(),
                detail: format!("neutrality: sigma={sigma} gives {mapped}, expected {expected}"),
            });
        }
    }
    Ok((false, violations))
}

/// Asserts the three independent impossibility tests agree at every grid
/// point: the partition characterization, the exhaustive histogram scan, and
/// (for m ≤ 5) the subgroup scan. Returns the disagreements, which must be
/// empty.
pub fn cross_check_impossibility(
    settings: &[Setting],
    n_lo: u64,
    n_hi: u64,
    budget: &EnumerationBudget,
) -> Result<Vec<String>> {
    let grid: Vec<(usize, u64)> = (0..settings.len())
        .flat_map(|i| (n_lo..=n_hi).map(move |n| (i, n)))
        .collect();
    let results: Vec<Result<Option<String>>> = grid
        .par_iter()
        .map(|&(i, n)| {
            let st = &settings[i];
            let closed = anr_impossible(st, n)?.is_some();
            let scan = brute_force_anr_exists(st, n, budget)?.is_some();
            let group = condition1_holds(st, n)?.is_some();
            if closed != scan || closed != group {
                Ok(Some(format!(
                    "{st} m={} n={n}: partition={closed} histogram-scan={scan} group-scan={group}",
                    st.m()
                )))
            } else {
                Ok(None)
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        if let Some(line) = r? {
            out.push(line);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::profile_minus;

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    #[test]
    fn histogram_counts() {
        assert_eq!(histogram_count(2, 2), Some(3));
        assert_eq!(histogram_count(3, 6), Some(56));
        assert_eq!(histogram_count(5, 1), Some(1));
    }

    #[test]
    fn enumerates_each_histogram_once() {
        let space = Space::full_rankings(3).unwrap();
        let hs: Vec<Histogram> = enumerate_histograms(&space, 3, &budget()).unwrap().collect();
        assert_eq!(hs.len(), 56);
        let dedup: std::collections::HashSet<_> = hs.iter().cloned().collect();
        assert_eq!(dedup.len(), 56);
        assert!(hs.iter().all(|h| h.n() == 3));

        let tiny = Space::lists(2, 1).unwrap();
        assert_eq!(
            enumerate_histograms(&tiny, 2, &budget()).unwrap().count(),
            3
        );
    }

    #[test]
    fn budget_is_enforced() {
        let space = Space::full_rankings(5).unwrap();
        let tight = EnumerationBudget {
            max_histograms: 10,
            ..budget()
        };
        assert!(matches!(
            enumerate_histograms(&space, 30, &tight),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn brute_force_matches_known_small_cases() {
        let st = |s: &str, m| Setting::parse(s, m).unwrap();
        // two voters, two alternatives: the classic deadlock profile
        let w = brute_force_anr_exists(&st("L2>L1", 2), 2, &budget())
            .unwrap()
            .expect("witness");
        let votes: Vec<String> = w.to_profile().votes.iter().map(|v| v.to_string()).collect();
        assert_eq!(votes, ["1>2", "2>1"]);
        // three voters: 2 is not a sum of 3's non-trivial divisors
        assert!(brute_force_anr_exists(&st("L2>L1", 2), 3, &budget())
            .unwrap()
            .is_none());
        assert!(brute_force_anr_exists(&st("L2>L2", 4), 7, &budget())
            .unwrap()
            .is_none());
        assert!(brute_force_anr_exists(&st("L2>L2", 4), 9, &budget())
            .unwrap()
            .is_some());
    }

    #[test]
    fn witnesses_really_are_problematic() {
        let budget = budget();
        for (s, m, n) in [("L2>L1", 2, 2), ("L2>L2", 4, 9), ("C1>C1", 3, 3)] {
            let st = Setting::parse(s, m).unwrap();
            if let Some(h) = brute_force_anr_exists(&st, n, &budget).unwrap() {
                let stab = stab_histogram(&h, m).unwrap();
                let decisions: BTreeSet<Pref> = st.dec_space.enumerate().into_iter().collect();
                assert!(fpd_from_stab(&stab, &decisions).is_empty(), "{s} n={n}");
            }
        }
    }

    #[test]
    fn mfp_passes_where_lex_fails() {
        let st = Setting::parse("Lm>L1", 3).unwrap();
        let rule = RuleSpec::Plurality;
        let mfp = TieBreaker::parse("mfp").unwrap();
        let lex = TieBreaker::parse("lex").unwrap();
        let report = verify_most_equitable(&rule, &mfp, &st, 3, &budget()).unwrap();
        assert_eq!(report.checked, 56);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        // plain lexicographic breaking is not neutral on tied histograms
        let report = verify_most_equitable(&rule, &lex, &st, 3, &budget()).unwrap();
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn no_problematic_profiles_for_trivial_rule_two_alternatives_odd_n() {
        let st = Setting::parse("Lm>L1", 2).unwrap();
        let rule = RuleSpec::Trivial;
        let tb = TieBreaker::parse("mfp").unwrap();
        let report = verify_most_equitable(&rule, &tb, &st, 3, &budget()).unwrap();
        assert_eq!(report.problematic, 0);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn problematic_profile_yields_witness() {
        let st = Setting::parse("Lm>L1", 5).unwrap();
        let rule = RuleSpec::Veto;
        let tb = TieBreaker::parse("mfp").unwrap();
        let prio = PriorityOrder::default_for(5);
        let p = profile_minus();
        let w = problematic_witness(&rule, &tb, &p, &st, &prio).unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn cross_check_small_grid() {
        let settings: Vec<Setting> = ["L1>L1", "L2>L1", "C1>L1", "C2>C1"]
            .iter()
            .map(|s| Setting::parse(s, 3).unwrap())
            .collect();
        let disagreements = cross_check_impossibility(&settings, 1, 6, &budget()).unwrap();
        assert!(disagreements.is_empty(), "{disagreements:?}");
    }
}

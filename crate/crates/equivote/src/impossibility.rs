//! Closed-form characterizations of when anonymous, neutral, resolute (ANR)
//! rules cannot exist.
//!
//! The core result: for list/committee preference and decision spaces, the
//! ANR impossibility at (m, n) holds iff some integer partition of m passes
//! two tests — a *sub-vector constraint* driven by the decision space (can
//! the cyclic group of the partition avoid fixing any decision?) and a
//! *change-making constraint* (can n be assembled from the "coin"
//! denominations the partition induces on the preference space?). Up-to-L
//! preference spaces pool the coins of every size class 1..=L.
//!
//! On top of that sit the at-large verdicts (does the impossibility hold for
//! every sufficiently large n?), the α exponent bounds governing how fast
//! violation likelihood vanishes, and the general group-theoretic condition
//! used as an independent cross-check.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::groups::{partitions, subgroups, Partition, PermGroup};
use crate::prefs::{Setting, SpaceKind};
use crate::{Error, Result};

/// Largest m for which the general group-based check enumerates subgroups.
const CONDITION1_MAX_M: usize = 5;

/// Which coin operation a preference space induces: `Circledast` (⊛) for
/// list spaces, `Oslash` (⊘) for committee spaces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoinOp {
    Circledast,
    Oslash,
}

/// α ⊛ β: α when β > 0, else 1. Requires α ≥ β ≥ 0 and α ≥ 1.
pub fn circledast(alpha: u64, beta: u64) -> Result<u64> {
    check_op_args(alpha, beta)?;
    Ok(if beta > 0 { alpha } else { 1 })
}

/// α ⊘ β: lcm(α,β)/β when β > 0, else 1. Requires α ≥ β ≥ 0 and α ≥ 1.
pub fn oslash(alpha: u64, beta: u64) -> Result<u64> {
    check_op_args(alpha, beta)?;
    Ok(alpha.lcm(&beta).checked_div(beta).unwrap_or(1))
}

fn check_op_args(alpha: u64, beta: u64) -> Result<()> {
    if alpha >= 1 && alpha >= beta {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "coin operation needs alpha >= beta >= 0 and alpha >= 1, got ({alpha},{beta})"
        )))
    }
}

/// The coin set of a partition at preference size ℓ: over all component-wise
/// splits 0 ≤ \vec ℓ ≤ \vec m with Σ\vec ℓ = ℓ, collect
/// lcm(m₁ op ℓ₁, …, m_T op ℓ_T).
pub fn lcmset(pm: &Partition, l: usize, op: CoinOp) -> Result<BTreeSet<u64>> {
    if l == 0 || l > pm.sum() {
        return Err(Error::Invalid(format!(
            "preference size {l} out of range for partition {pm}"
        )));
    }
    let parts = pm.parts();
    let mut coins = BTreeSet::new();
    let mut split = vec![0usize; parts.len()];
    collect_splits(parts, l, 0, &mut split, op, &mut coins)?;
    Ok(coins)
}

fn collect_splits(
    parts: &[usize],
    remaining: usize,
    idx: usize,
    split: &mut Vec<usize>,
    op: CoinOp,
    coins: &mut BTreeSet<u64>,
) -> Result<()> {
    if idx == parts.len() {
        if remaining == 0 {
            let mut acc = 1u64;
            for (&m_i, &l_i) in parts.iter().zip(split.iter()) {
                let v = match op {
                    CoinOp::Circledast => circledast(m_i as u64, l_i as u64)?,
                    CoinOp::Oslash => oslash(m_i as u64, l_i as u64)?,
                };
                acc = acc.lcm(&v);
            }
            coins.insert(acc);
        }
        return Ok(());
    }
    let tail: usize = parts[idx + 1..].iter().sum();
    let lo = remaining.saturating_sub(tail);
    let hi = remaining.min(parts[idx]);
    for l_i in lo..=hi {
        split[idx] = l_i;
        collect_splits(parts, remaining - l_i, idx + 1, split, op, coins)?;
    }
    Ok(())
}

/// True iff n is a non-negative integer combination of the coins, not all
/// coefficients zero. Exact bounded DP, no shortcuts.
pub fn feasible(n: u64, coins: &BTreeSet<u64>) -> bool {
    if n == 0 || coins.is_empty() {
        return false;
    }
    let n = n as usize;
    let mut dp = vec![false; n + 1];
    dp[0] = true;
    for &c in coins {
        let c = c as usize;
        if c == 0 || c > n {
            continue;
        }
        for j in c..=n {
            if dp[j - c] {
                dp[j] = true;
            }
        }
    }
    dp[n]
}

/// The decision-space constraint on a candidate partition: for k-lists, the
/// partition must contain fewer than k ones; for k-committees, no subset of
/// its parts may sum to k.
pub fn subvector_ok(pm: &Partition, dec_kind: SpaceKind, k: usize) -> bool {
    match dec_kind {
        SpaceKind::List => pm.parts().iter().filter(|&&p| p == 1).count() < k,
        SpaceKind::Committee => {
            let m = pm.sum();
            let mut reachable = vec![false; m + 1];
            reachable[0] = true;
            for &p in pm.parts() {
                for s in (p..=m).rev() {
                    if reachable[s - p] {
                        reachable[s] = true;
                    }
                }
            }
            !reachable[k]
        }
    }
}

/// The coins a preference space induces under a candidate partition. Exact
/// sizes use that size's coin set; up-to-L spaces pool the coins of every
/// size class (the impossibility for a disjoint union of spaces uses all the
/// coins the classes create).
pub fn coins_for_pref_space(pm: &Partition, setting: &Setting) -> Result<BTreeSet<u64>> {
    let sp = setting.pref_space;
    let op = match sp.kind {
        SpaceKind::List => CoinOp::Circledast,
        SpaceKind::Committee => CoinOp::Oslash,
    };
    let mut coins = BTreeSet::new();
    for l in sp.min_size..=sp.max_size {
        coins.extend(lcmset(pm, l, op)?);
    }
    Ok(coins)
}

/// Whether the ANR impossibility holds at (setting, n): no anonymous,
/// neutral, resolute rule exists. Returns the first witness partition (in
/// reverse-lexicographic enumeration order) when it does.
pub fn anr_impossible(setting: &Setting, n: u64) -> Result<Option<Partition>> {
    let m = setting.m();
    let dec = setting.dec_space;
    for pm in partitions(m) {
        if !subvector_ok(&pm, dec.kind, dec.max_size) {
            continue;
        }
        if feasible(n, &coins_for_pref_space(&pm, setting)?) {
            return Ok(Some(pm));
        }
    }
    Ok(None)
}

/// At-large verdict: does the impossibility hold for every sufficiently
/// large n?
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AtLargeVerdict {
    /// Holds, and in fact for every n ≥ threshold_n (= ⌈m²/2⌉).
    Holds { threshold_n: u64 },
    HoldsNot,
    /// The known sufficient condition does not fire; exact-size spaces have
    /// no full characterization.
    Unknown,
}

/// Decides at-large ANR impossibility. Up-to-L preference spaces have an
/// exact characterization (`Holds`/`HoldsNot`); exact-size spaces only a
/// sufficient condition (`Holds`/`Unknown`).
pub fn at_large(setting: &Setting) -> AtLargeVerdict {
    let m = setting.m();
    let k = setting.dec_space.max_size;
    let dec_kind = setting.dec_space.kind;
    let sp = setting.pref_space;
    let threshold_n = ((m * m) as u64).div_ceil(2); // ⌈m²/2⌉
    let holds = AtLargeVerdict::Holds { threshold_n };

    // A size-1 exact space equals the up-to-1 space, so the exact
    // characterization below covers it; the sufficient-only table is needed
    // only for exact sizes >= 2.
    if sp.min_size >= 2 {
        let l = sp.max_size;
        let fires = match (sp.kind, dec_kind) {
            (SpaceKind::List, SpaceKind::List) => m >= 8 && 2 * l + 4 <= m,
            (SpaceKind::List, SpaceKind::Committee) => m >= 12 && 4 * l + 8 <= m && k < m,
            (SpaceKind::Committee, SpaceKind::List) => m >= 4 && l + 2 <= m,
            (SpaceKind::Committee, SpaceKind::Committee) => {
                m >= 2 && k < m && (!(l == k || l == m - k) || 2 * l + 6 <= m)
            }
        };
        return if fires { holds } else { AtLargeVerdict::Unknown };
    }

    let l_max = sp.max_size;
    let iff = match (sp.kind, dec_kind) {
        (SpaceKind::List, SpaceKind::List) => m == 5 || m >= 7 || k >= 2,
        (SpaceKind::List, SpaceKind::Committee) => {
            ((m == 5 || m >= 7) && k < m) || (2 <= k && k <= m - 2)
        }
        (SpaceKind::Committee, SpaceKind::List) => {
            let base = m == 5 || m >= 7 || l_max.max(k) >= 2;
            let exception = (m, l_max, k) == (2, 1, 2) || (m, l_max, k) == (3, 2, 1);
            base && !exception
        }
        (SpaceKind::Committee, SpaceKind::Committee) => {
            // [L] ⊆ {k, m−k} is only possible for L ≤ 2
            let l_subset = (1..=l_max).all(|x| x == k || x == m - k);
            ((m == 5 || m >= 7) && k < m) || (!l_subset && k < m)
        }
    };
    if iff {
        holds
    } else {
        AtLargeVerdict::HoldsNot
    }
}

/// The exponent bounds for the likelihood of ANR violations over full
/// rankings: α_max over partitions of m into non-trivial divisors of n, and
/// α_max⁺ over single non-trivial divisors of n up to m. `None` encodes −∞.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AlphaBounds {
    pub alpha_max: Option<u64>,
    pub alpha_max_plus: Option<u64>,
}

pub fn alpha_bounds(m: usize, n: u64) -> AlphaBounds {
    let m_fact: u64 = (1..=m as u64).product();
    let alpha_max = partitions(m)
        .into_iter()
        .filter(|pm| pm.parts().iter().all(|&p| p >= 2) && n.is_multiple_of(pm.lcm()))
        .map(|pm| m_fact / pm.lcm())
        .max();
    let alpha_max_plus = (2..=m as u64)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| m_fact / d)
        .max();
    AlphaBounds {
        alpha_max,
        alpha_max_plus,
    }
}

/// The general group-theoretic impossibility condition, decided by explicit
/// subgroup enumeration: the impossibility holds iff some permutation group
/// fixes no decision while n is feasible by its orbit sizes on the
/// preference space. Sound and complete for m ≤ 5 (where every subgroup of
/// S_m is generated by at most two elements).
pub fn condition1_holds(setting: &Setting, n: u64) -> Result<Option<PermGroup>> {
    let m = setting.m();
    if m > CONDITION1_MAX_M {
        return Err(Error::Budget(format!(
            "subgroup enumeration supported for m <= {CONDITION1_MAX_M}, got {m}"
        )));
    }
    for g in subgroups(m) {
        if g.is_trivial() {
            continue; // the trivial group fixes every decision
        }
        if !g.fixed_points(&setting.dec_space).is_empty() {
            continue;
        }
        let coins: BTreeSet<u64> = g
            .orbit_sizes_space(&setting.pref_space)
            .into_iter()
            .map(|s| s as u64)
            .collect();
        if feasible(n, &coins) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

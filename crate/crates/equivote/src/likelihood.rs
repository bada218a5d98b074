//! How often does tie-breaking have to hurt? Samplers over vote
//! distributions, Monte Carlo and exact computation of the probability that
//! a random profile is problematic (no decision survives the histogram's
//! stabilizer), and the theoretical decay exponents that probability obeys.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::impossibility::alpha_bounds;
use crate::oracle::{enumerate_histograms, EnumerationBudget};
use crate::prefs::{Alt, Pref, Profile, Setting};
use crate::rules::RuleSpec;
use crate::tiebreak::is_problematic;
use crate::{Error, Result};

/// A probability distribution over full rankings of m alternatives. Every
/// ranking has strictly positive probability.
#[derive(Clone, PartialEq, Debug)]
pub enum DistributionFamily {
    /// Uniform over all m! rankings.
    ImpartialCulture,
    /// Mallows model: P(R) ∝ φ^{kendall(R, reference)}, φ ∈ (0,1].
    Mallows { phi: f64, reference: Vec<Alt> },
    /// Finite mixture; weights are positive and sum to 1.
    Mixture(Vec<(f64, DistributionFamily)>),
}

impl DistributionFamily {
    pub fn mallows(phi: f64, reference: Vec<Alt>) -> Result<Self> {
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(Error::Invalid(format!("phi must be in (0,1], got {phi}")));
        }
        let m = reference.len();
        let mut seen = vec![false; m];
        for &a in &reference {
            if a == 0 || a as usize > m || seen[a as usize - 1] {
                return Err(Error::Invalid("reference must be a ranking".into()));
            }
            seen[a as usize - 1] = true;
        }
        Ok(DistributionFamily::Mallows { phi, reference })
    }

    pub fn mixture(components: Vec<(f64, DistributionFamily)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("mixture needs components".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|&(w, _)| w <= 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(
                "mixture weights must be positive and sum to 1".into(),
            ));
        }
        Ok(DistributionFamily::Mixture(components))
    }

    /// Draws one full ranking of m alternatives.
    pub fn sample(&self, m: usize, rng: &mut impl Rng) -> Result<Pref> {
        match self {
            DistributionFamily::ImpartialCulture => {
                let mut alts: Vec<Alt> = (1..=m as Alt).collect();
                alts.shuffle(rng);
                Ok(Pref::List(alts))
            }
            DistributionFamily::Mallows { phi, reference } => {
                if reference.len() != m {
                    return Err(Error::Invalid(format!(
                        "Mallows reference has {} alternatives, expected {m}",
                        reference.len()
                    )));
                }
                // repeated insertion: the i-th reference item goes to slot j
                // (1-based) with probability φ^{i−j} / (1 + φ + … + φ^{i−1})
                let mut out: Vec<Alt> = Vec::with_capacity(m);
                for (i, &a) in reference.iter().enumerate() {
                    let i = i + 1;
                    let weights: Vec<f64> = (1..=i).map(|j| phi.powi((i - j) as i32)).collect();
                    let j = WeightedIndex::new(&weights)
                        .map_err(|e| Error::Invalid(e.to_string()))?
                        .sample(rng);
                    out.insert(j, a);
                }
                Ok(Pref::List(out))
            }
            DistributionFamily::Mixture(components) => {
                let weights: Vec<f64> = components.iter().map(|(w, _)| *w).collect();
                let idx = WeightedIndex::new(&weights)
                    .map_err(|e| Error::Invalid(e.to_string()))?
                    .sample(rng);
                components[idx].1.sample(m, rng)
            }
        }
    }

    /// Probability of one full ranking under this distribution.
    pub fn probability(&self, vote: &Pref, m: usize) -> Result<f64> {
        let ranking = match vote {
            Pref::List(alts) if alts.len() == m => alts,
            _ => {
                return Err(Error::Invalid(
                    "distributions are over full rankings only".into(),
                ))
            }
        };
        match self {
            DistributionFamily::ImpartialCulture => {
                let m_fact: f64 = (1..=m as u64).product::<u64>() as f64;
                Ok(1.0 / m_fact)
            }
            DistributionFamily::Mallows { phi, reference } => {
                if reference.len() != m {
                    return Err(Error::Invalid("reference length mismatch".into()));
                }
                // Z = ∏_{i=1}^m (1 + φ + … + φ^{i−1})
                let z: f64 = (1..=m)
                    .map(|i| (0..i).map(|e| phi.powi(e as i32)).sum::<f64>())
                    .product();
                Ok(phi.powi(kendall_tau(ranking, reference) as i32) / z)
            }
            DistributionFamily::Mixture(components) => components
                .iter()
                .map(|(w, d)| d.probability(vote, m).map(|p| w * p))
                .sum(),
        }
    }
}

/// Number of discordant pairs between two rankings of the same alternatives.
pub fn kendall_tau(a: &[Alt], b: &[Alt]) -> usize {
    let m = a.len();
    let mut pos_b = vec![0usize; m + 1];
    for (i, &x) in b.iter().enumerate() {
        pos_b[x as usize] = i;
    }
    let mapped: Vec<usize> = a.iter().map(|&x| pos_b[x as usize]).collect();
    let mut count = 0;
    for i in 0..m {
        for j in i + 1..m {
            if mapped[i] > mapped[j] {
                count += 1;
            }
        }
    }
    count
}

/// Draws an n-profile with vote i from dists[i], independently.
/// Deterministic given the seed.
pub fn sample_profile(dists: &[DistributionFamily], m: usize, seed: u64) -> Result<Profile> {
    if dists.is_empty() {
        return Err(Error::Invalid("need at least one voter".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let votes = dists
        .iter()
        .map(|d| d.sample(m, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(votes)
}

/// A violation-likelihood measurement.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ViolationEstimate {
    pub rate: f64,
    pub trials: u64,
    pub stderr: f64,
    pub exact: bool,
}

/// Monte Carlo estimate of the probability that an n-profile of i.i.d.
/// votes from `dist` is problematic for the rule. Trials are independent
/// and seeded as (seed, trial index), so the result is deterministic and
/// independent of parallel scheduling.
pub fn estimate_violation(
    rule: &RuleSpec,
    setting: &Setting,
    dist: &DistributionFamily,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<ViolationEstimate> {
    if trials == 0 {
        return Err(Error::Invalid("need at least one trial".into()));
    }
    let m = setting.m();
    let dists = vec![dist.clone(); n as usize];
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let votes = dists
                .iter()
                .map(|d| d.sample(m, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            let p = Profile::new(votes)?;
            Ok(u64::from(is_problematic(&p.histogram(), rule, setting)?))
        })
        .try_reduce(|| 0, |a, b: u64| Ok(a + b))?;
    let rate = hits as f64 / trials as f64;
    Ok(ViolationEstimate {
        rate,
        trials,
        stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
        exact: false,
    })
}

/// Exact violation probability: sums multinomial probability over every
/// histogram of n votes, in log-space to avoid underflow.
pub fn exact_violation(
    rule: &RuleSpec,
    setting: &Setting,
    dist: &DistributionFamily,
    n: u64,
    budget: &EnumerationBudget,
) -> Result<ViolationEstimate> {
    let m = setting.m();
    let prefs = setting.pref_space.enumerate();
    let log_p: Vec<f64> = prefs
        .iter()
        .map(|v| dist.probability(v, m).map(f64::ln))
        .collect::<Result<_>>()?;
    // ln k! for k ≤ n
    let mut log_fact = vec![0.0f64; n as usize + 1];
    for k in 1..=n as usize {
        log_fact[k] = log_fact[k - 1] + (k as f64).ln();
    }
    let histograms: Vec<_> = enumerate_histograms(&setting.pref_space, n, budget)?.collect();
    let total: f64 = histograms
        .par_iter()
        .map(|h| {
            if !is_problematic(h, rule, setting)? {
                return Ok(0.0);
            }
            let mut log_prob = log_fact[n as usize];
            for (v, c) in h.iter() {
                let i = prefs.binary_search(v).expect("vote from the space");
                log_prob += c as f64 * log_p[i] - log_fact[c as usize];
            }
            Ok(log_prob.exp())
        })
        .try_reduce(|| 0.0, |a, b: f64| Ok(a + b))?;
    Ok(ViolationEstimate {
        rate: total,
        trials: histograms.len() as u64,
        stderr: 0.0,
        exact: true,
    })
}

/// The proven decay exponents for the violation probability over full
/// rankings: rate is Ω(n^lower) and O(n^upper); −∞ (here `f64::NEG_INFINITY`)
/// for the lower bound means a violation is impossible for this (m, n)
/// residue class.
pub fn theoretical_exponents(m: usize, n: u64) -> (f64, f64) {
    let m_fact: u64 = (1..=m as u64).product();
    let b = alpha_bounds(m, n);
    let exp = |a: Option<u64>| match a {
        Some(alpha) => (alpha as f64 - m_fact as f64) / 2.0,
        None => f64::NEG_INFINITY,
    };
    (exp(b.alpha_max), exp(b.alpha_max_plus))
}

/// Least-squares slope of log rate against log n. Points with rate 0 are
/// rejected; at least 3 positive points are required.
pub fn slope_fit(points: &[(u64, f64)]) -> Result<f64> {
    if points.len() < 3 || points.iter().any(|&(_, r)| r <= 0.0) {
        return Err(Error::Invalid(
            "slope fit needs at least 3 points with positive rates".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("all n values identical".into()));
    }
    Ok(sxy / sxx)
}

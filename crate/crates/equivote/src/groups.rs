//! Permutation-group algebra: closures, stabilizers of histograms, orbits,
//! fixed points, fixed-point decisions, integer partitions, and the cyclic
//! groups they generate.
//!
//! Groups are stored as explicit, sorted element sets. That is deliberate:
//! every caller works at small `m` (at most [`crate::prefs::MAX_M`]), where
//! |S_m| ≤ 8! and nothing fancier than set closure is needed.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::hash::Hash;

use crate::prefs::{Alt, Histogram, Perm, Pref, Profile, Space, MAX_M};
use crate::{Error, Result};

/// Safety cap on closure size; |S_8| = 40320.
const CLOSURE_CAP: usize = 40_320;

/// A permutation group over `1..=m`, stored as its full element set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermGroup {
    /// Sorted, deduplicated; always contains the identity.
    elems: Vec<Perm>,
}

impl PermGroup {
    /// The trivial group {Id}.
    pub fn trivial(m: usize) -> Self {
        PermGroup {
            elems: vec![Perm::identity(m)],
        }
    }

    /// The full symmetric group S_m.
    pub fn symmetric(m: usize) -> Self {
        PermGroup {
            elems: Perm::all(m),
        }
    }

    /// The smallest group containing `generators` (closure under
    /// composition; inverses follow because the group is finite).
    pub fn closure(generators: &[Perm]) -> Result<Self> {
        let m = generators
            .first()
            .map(Perm::m)
            .ok_or_else(|| Error::Invalid("closure needs at least one generator".into()))?;
        if generators.iter().any(|g| g.m() != m) {
            return Err(Error::Invalid("generators disagree on m".into()));
        }
        let mut set: BTreeSet<Perm> = BTreeSet::new();
        set.insert(Perm::identity(m));
        let mut frontier: Vec<Perm> = vec![Perm::identity(m)];
        while let Some(g) = frontier.pop() {
            for gen in generators {
                let h = gen.compose(&g);
                if set.insert(h.clone()) {
                    if set.len() > CLOSURE_CAP {
                        return Err(Error::Budget(format!(
                            "group closure exceeds {CLOSURE_CAP} elements"
                        )));
                    }
                    frontier.push(h);
                }
            }
        }
        Ok(PermGroup {
            elems: set.into_iter().collect(),
        })
    }

    pub fn from_elements(mut elems: Vec<Perm>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        PermGroup { elems }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn m(&self) -> usize {
        self.elems[0].m()
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elems
    }

    pub fn contains(&self, sigma: &Perm) -> bool {
        self.elems.binary_search(sigma).is_ok()
    }

    /// Orbit of a preference under this group.
    pub fn orbit(&self, x: &Pref) -> BTreeSet<Pref> {
        self.elems.iter().map(|g| g.apply_pref(x)).collect()
    }

    /// Orbit of a single alternative.
    pub fn orbit_alt(&self, a: Alt) -> BTreeSet<Alt> {
        self.elems.iter().map(|g| g.apply_alt(a)).collect()
    }

    /// Orbit sizes of the group action on an arbitrary finite set, given by
    /// its elements and the action itself. Sizes come back non-increasing.
    pub fn orbit_sizes_by<T, F>(&self, items: &[T], act: F) -> Vec<usize>
    where
        T: Clone + Eq + Hash,
        F: Fn(&Perm, &T) -> T,
    {
        let mut seen: HashMap<&T, bool> = items.iter().map(|x| (x, false)).collect();
        let mut sizes = Vec::new();
        for x in items {
            if seen[x] {
                continue;
            }
            let mut orbit = Vec::new();
            for g in &self.elems {
                let y = act(g, x);
                if let Some(v) = seen.get_mut(&y) {
                    if !*v {
                        *v = true;
                        orbit.push(y);
                    }
                }
            }
            sizes.push(orbit.len());
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Orbit sizes on the alternatives `1..=m`; the result is a partition of
    /// m with every part dividing |G|.
    pub fn orbit_sizes_alts(&self) -> Partition {
        let alts: Vec<Alt> = (1..=self.m() as Alt).collect();
        let sizes = self.orbit_sizes_by(&alts, |g, &a| g.apply_alt(a));
        Partition::new(sizes).expect("orbit sizes always partition m")
    }

    /// Orbit sizes on a preference or decision space.
    pub fn orbit_sizes_space(&self, space: &Space) -> Vec<usize> {
        let items = space.enumerate();
        self.orbit_sizes_by(&items, |g, p| g.apply_pref(p))
    }

    /// Elements of `space` fixed by every group element.
    pub fn fixed_points(&self, space: &Space) -> Vec<Pref> {
        space
            .enumerate()
            .into_iter()
            .filter(|p| self.elems.iter().all(|g| &g.apply_pref(p) == p))
            .collect()
    }

    /// True iff every group element fixes `x`.
    pub fn fixes(&self, x: &Pref) -> bool {
        self.elems.iter().all(|g| &g.apply_pref(x) == x)
    }
}

/// The stabilizer {σ ∈ S_m : σ(h) = h} of a histogram.
///
/// For histograms of full rankings, a permutation mapping one full ranking to
/// another is unique, so the candidates are just the permutations sending one
/// fixed vote to each equal-multiplicity vote — at most `distinct(h)` of them
/// — each then checked against the whole histogram. Other spaces fall back to
/// filtering all of S_m, which requires `m ≤ MAX_M`.
pub fn stab_histogram(h: &Histogram, m: usize) -> Result<PermGroup> {
    if h.n() == 0 {
        return Err(Error::Invalid("stabilizer of an empty histogram".into()));
    }
    let full_rankings = h
        .iter()
        .all(|(p, _)| p.is_list() && p.size() == m && p.alts().len() == m);
    let elems: Vec<Perm> = if full_rankings {
        let (r0, c0) = h.iter().next().expect("nonempty");
        h.iter()
            .filter(|&(_, c)| c == c0)
            .map(|(r, _)| perm_mapping_ranking(r0, r))
            .filter(|sigma| h.fixed_by(sigma))
            .collect()
    } else {
        if m > MAX_M {
            return Err(Error::Budget(format!(
                "generic stabilizer scan needs m <= {MAX_M}, got {m}"
            )));
        }
        Perm::all(m)
            .into_iter()
            .filter(|sigma| h.fixed_by(sigma))
            .collect()
    };
    Ok(PermGroup::from_elements(elems))
}

/// The unique permutation mapping full ranking `from` to full ranking `to`,
/// positionally: the i-th element of `from` goes to the i-th element of `to`.
pub fn perm_mapping_ranking(from: &Pref, to: &Pref) -> Perm {
    debug_assert_eq!(from.size(), to.size());
    let mut img = vec![0; from.size()];
    for (&a, &b) in from.alts().iter().zip(to.alts()) {
        img[a as usize - 1] = b;
    }
    Perm::from_images(img).expect("two full rankings define a bijection")
}

/// Fixed-point decisions of a profile: the decisions in `d` that every
/// stabilizer of the profile's histogram fixes.
pub fn fpd(profile: &Profile, d: &BTreeSet<Pref>, m: usize) -> Result<BTreeSet<Pref>> {
    let stab = stab_histogram(&profile.histogram(), m)?;
    Ok(fpd_from_stab(&stab, d))
}

/// Same as [`fpd`] with the stabilizer already computed.
pub fn fpd_from_stab(stab: &PermGroup, d: &BTreeSet<Pref>) -> BTreeSet<Pref> {
    d.iter().filter(|x| stab.fixes(x)).cloned().collect()
}

// ---------------------------------------------------------------------------
// Partitions and the cyclic groups they generate
// ---------------------------------------------------------------------------

/// An integer partition: positive parts in non-increasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn lcm(&self) -> u64 {
        self.0
            .iter()
            .fold(1u64, |acc, &p| num_integer::lcm(acc, p as u64))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `m`, in reverse-lexicographic order:
/// (m), (m−1,1), …, (1,…,1).
pub fn partitions(m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(current.clone()));
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    rec(m, m, &mut current, &mut out);
    out
}

/// The canonical generator of the cyclic group of a partition: disjoint
/// cycles over consecutive blocks, e.g. (3,2) ↦ (1,2,3)(4,5).
pub fn partition_generator(p: &Partition) -> Perm {
    let m = p.sum();
    let mut img: Vec<Alt> = (1..=m as Alt).collect();
    let mut start = 1usize;
    for &part in p.parts() {
        for i in 0..part {
            img[start + i - 1] = (start + (i + 1) % part) as Alt;
        }
        start += part;
    }
    Perm::from_images(img).expect("blocks of a partition form disjoint cycles")
}

/// The cyclic group generated by [`partition_generator`]; its order is
/// lcm of the parts and its orbit sizes on the alternatives are the parts.
pub fn cyclic_group_from_partition(p: &Partition) -> PermGroup {
    PermGroup::closure(&[partition_generator(p)]).expect("cyclic group order = lcm <= m!")
}

/// Every subgroup of S_m, computed as the distinct closures of generator
/// sets of size at most two. Complete for m ≤ 5 (every subgroup of S_5 is
/// 2-generated); callers needing larger m must not rely on completeness.
pub fn subgroups(m: usize) -> Vec<PermGroup> {
    let all = Perm::all(m);
    let mut seen: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |g: PermGroup, out: &mut Vec<PermGroup>| {
        if seen.insert(g.elements().to_vec()) {
            out.push(g);
        }
    };
    push(PermGroup::trivial(m), &mut out);
    for (i, a) in all.iter().enumerate() {
        push(
            PermGroup::closure(std::slice::from_ref(a)).expect("cyclic subgroup"),
            &mut out,
        );
        for b in &all[i + 1..] {
            push(
                PermGroup::closure(&[a.clone(), b.clone()]).expect("2-generated subgroup"),
                &mut out,
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::{profile_minus, profile_plus};

    fn perm(s: &str, m: usize) -> Perm {
        Perm::from_cycles(s, m).unwrap()
    }

    #[test]
    fn closure_of_transposition() {
        let g = PermGroup::closure(&[perm("(1,2)", 5)]).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.contains(&Perm::identity(5)));
        assert!(g.contains(&perm("(1,2)", 5)));
    }

    #[test]
    fn closure_generates_s3() {
        let g = PermGroup::closure(&[perm("(1,2)", 3), perm("(1,2,3)", 3)]).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn cyclic_group_order_is_lcm() {
        let p = Partition::new(vec![3, 2]).unwrap();
        assert_eq!(partition_generator(&p), perm("(1,2,3)(4,5)", 5));
        let g = cyclic_group_from_partition(&p);
        assert_eq!(g.order(), 6);
        assert_eq!(g.orbit_sizes_alts(), p);
        assert_eq!(g.orbit_alt(4), [4, 5].into());

        let ones = Partition::new(vec![1, 1, 1]).unwrap();
        assert!(cyclic_group_from_partition(&ones).is_trivial());

        let twos = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(cyclic_group_from_partition(&twos).order(), 2);
    }

    #[test]
    fn stabilizer_of_reference_profiles() {
        for p in [profile_plus(), profile_minus()] {
            let stab = stab_histogram(&p.histogram(), 5).unwrap();
            assert_eq!(stab.order(), 2);
            assert!(stab.contains(&perm("(1,2)", 5)));
        }
    }

    #[test]
    fn stabilizer_of_single_vote_is_trivial() {
        let p = Profile::parse("1>2>3").unwrap();
        assert!(stab_histogram(&p.histogram(), 3).unwrap().is_trivial());
    }

    #[test]
    fn fast_path_matches_generic_scan() {
        // Committee histograms exercise the generic path; re-encoding the
        // same data as padded rankings is not possible, so instead compare
        // the two paths on full-ranking data by forcing the generic scan.
        let h = profile_plus().histogram();
        let fast = stab_histogram(&h, 5).unwrap();
        let generic: Vec<Perm> = Perm::all(5)
            .into_iter()
            .filter(|s| h.fixed_by(s))
            .collect();
        assert_eq!(fast.elements(), &generic[..]);
    }

    #[test]
    fn orbits_of_pair_lists() {
        let g = PermGroup::closure(&[perm("(1,2)(3,4)", 4)]).unwrap();
        assert_eq!(
            g.orbit(&Pref::list(vec![1, 3])),
            [Pref::list(vec![1, 3]), Pref::list(vec![2, 4])].into()
        );
        let l2 = Space::lists(4, 2).unwrap();
        assert_eq!(g.orbit_sizes_space(&l2), vec![2; 6]);
    }

    #[test]
    fn orbit_sizes_on_two_vote_histograms() {
        // {Id, (1,2)(3,4)} acting on histograms of 2 votes over the four
        // singleton lists: orbit sizes (2,2,2,2,1,1).
        let g = PermGroup::closure(&[perm("(1,2)(3,4)", 4)]).unwrap();
        let singles: Vec<Pref> = (1..=4).map(|a| Pref::list(vec![a])).collect();
        let mut hists = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                let mut counts = std::collections::BTreeMap::new();
                *counts.entry(singles[i].clone()).or_insert(0u64) += 1;
                *counts.entry(singles[j].clone()).or_insert(0u64) += 1;
                hists.push(Histogram::from_counts(counts));
            }
        }
        assert_eq!(hists.len(), 10);
        let sizes = g.orbit_sizes_by(&hists, |s, h| h.apply(s));
        assert_eq!(sizes, vec![2, 2, 2, 2, 1, 1]);
    }

    #[test]
    fn fixed_points_of_groups() {
        let m5 = Space::lists(5, 1).unwrap();
        let g = PermGroup::closure(&[perm("(1,2)", 5)]).unwrap();
        assert_eq!(
            g.fixed_points(&m5),
            (3..=5).map(|a| Pref::list(vec![a])).collect::<Vec<_>>()
        );
        let s3 = PermGroup::symmetric(3);
        assert!(s3.fixed_points(&Space::lists(3, 1).unwrap()).is_empty());
        let trivial = PermGroup::trivial(3);
        assert_eq!(trivial.fixed_points(&Space::lists(3, 3).unwrap()).len(), 6);
    }

    #[test]
    fn fixed_point_decisions_of_reference_profiles() {
        let single = |a: Alt| Pref::list(vec![a]);
        let d_minus: BTreeSet<Pref> = [single(1), single(2)].into();
        assert!(fpd(&profile_minus(), &d_minus, 5).unwrap().is_empty());
        let d_plus: BTreeSet<Pref> = (1..=4).map(single).collect();
        assert_eq!(
            fpd(&profile_plus(), &d_plus, 5).unwrap(),
            [single(3), single(4)].into()
        );
    }

    #[test]
    fn partitions_in_reverse_lexicographic_order() {
        let ps: Vec<Vec<usize>> = partitions(4).iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(
            ps,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(8).len(), 22);
    }

    #[test]
    fn subgroup_counts_of_small_symmetric_groups() {
        assert_eq!(subgroups(3).len(), 6);
        assert_eq!(subgroups(4).len(), 30);
        assert_eq!(subgroups(5).len(), 156);
    }

    #[test]
    fn orbit_stabilizer_on_alternatives() {
        let g = cyclic_group_from_partition(&Partition::new(vec![3, 2]).unwrap());
        for a in 1..=5 {
            let orbit = g.orbit_alt(a);
            let stab_size = g
                .elements()
                .iter()
                .filter(|s| s.apply_alt(a) == a)
                .count();
            assert_eq!(orbit.len() * stab_size, g.order());
        }
    }
}
